//! Finite-depth J-fractions as a moment route, plus a text renderer.

use std::fmt::Display;

use thiserror::Error;

use crate::orthopoly::{jfraction_series_from, Jacobi};
use crate::ring::CoeffRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("depth {depth} is too shallow for order {order} (need at least {needed})")]
    InsufficientDepth { depth: usize, order: usize, needed: usize },
    #[error("depth must be at least 1")]
    ZeroDepth,
}

/// `1 / (1 - b_0 z - lam_1 z^2 / (1 - b_1 z - lam_2 z^2 / (... / (1 - b_depth z))))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedFractionSpec<R> {
    pub depth: usize,
    /// `b_0..=b_depth`.
    pub b: Vec<R>,
    /// `lam_1..=lam_depth`, stored from index 0.
    pub lam: Vec<R>,
}

pub fn cf_spec<R, J: Jacobi<R>>(j: &J, depth: usize) -> Result<ContinuedFractionSpec<R>, CfError> {
    if depth == 0 {
        return Err(CfError::ZeroDepth);
    }
    Ok(ContinuedFractionSpec {
        depth,
        b: (0..=depth).map(|k| j.alpha(k)).collect(),
        lam: (1..=depth).map(|k| j.omega(k)).collect(),
    })
}

/// Smallest depth that determines the series through `z^order`.
pub fn min_depth(order: usize) -> usize {
    order.div_ceil(2)
}

pub fn default_depth(order: usize) -> usize {
    min_depth(order) + 1
}

pub fn cf_series<R: CoeffRing>(spec: &ContinuedFractionSpec<R>, order: usize) -> Result<Vec<R>, CfError> {
    let needed = min_depth(order);
    if spec.depth < needed {
        return Err(CfError::InsufficientDepth {
            depth: spec.depth,
            order,
            needed,
        });
    }
    Ok(jfraction_series_from(&spec.b, &spec.lam, order))
}

fn wrap(s: String) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

impl<R: CoeffRing + Display> ContinuedFractionSpec<R> {
    /// One-line nested layout, e.g.
    /// `1/(1 - lambda z - lambda z^2/(1 - (lambda + 1) z - ...))`.
    pub fn render(&self) -> String {
        let mut inner = format!("1 - {} z", wrap(self.b[self.depth].to_string()));
        for k in (0..self.depth).rev() {
            inner = format!(
                "1 - {} z - {} z^2/({})",
                wrap(self.b[k].to_string()),
                wrap(self.lam[k].to_string()),
                inner
            );
        }
        format!("1/({inner})")
    }

    /// Staircase layout with one level per line.
    pub fn render_nested(&self) -> String {
        let mut out = String::from("1\n");
        for k in 0..=self.depth {
            let indent = "  ".repeat(k);
            out.push_str(&format!("{indent}-----\n{indent}1 - {} z", wrap(self.b[k].to_string())));
            if k < self.depth {
                out.push_str(&format!(" - {} z^2\n", wrap(self.lam[k].to_string())));
            } else {
                out.push('\n');
            }
        }
        out
    }
}
