//! (q,t)-numbers `[n] = t^(n-1) + t^(n-2) q + ... + q^(n-1)` and their
//! factorials.

use crate::ring::{Monomial, Polynomial, Var};

/// `[n]_{q,t}` as the explicit sum; `[0] = 0`.
pub fn qt_number(n: u32) -> Polynomial {
    let mut out = Polynomial::zero();
    for k in 1..=n {
        let m = Monomial::from_exponents([(Var::T, n - k), (Var::Q, k - 1)]);
        out += Polynomial::term(1, m);
    }
    out
}

/// `[1][2]...[n]`, with the empty product equal to 1.
pub fn qt_factorial(n: u32) -> Polynomial {
    (1..=n).map(qt_number).product()
}

/// `[0], [1], ..., [n_max]` computed once for repeated lookups.
#[derive(Debug, Clone)]
pub struct QtNumbers {
    table: Vec<Polynomial>,
}

impl QtNumbers {
    pub fn new(n_max: u32) -> Self {
        QtNumbers {
            table: (0..=n_max).map(qt_number).collect(),
        }
    }

    pub fn get(&self, n: u32) -> Polynomial {
        self.table
            .get(n as usize)
            .cloned()
            .unwrap_or_else(|| qt_number(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rational, Assignment};

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    fn inversions(perm: &[usize]) -> u32 {
        let mut inv = 0;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    #[test]
    fn small_values() {
        assert!(qt_number(0).is_zero());
        assert_eq!(qt_number(1), p("1"));
        assert_eq!(qt_number(2), p("t + q"));
        assert_eq!(qt_number(3), p("t^2 + t*q + q^2"));
    }

    #[test]
    fn classical_limit() {
        let mut one = Assignment::new();
        one.insert(Var::Q, rational(1, 1));
        one.insert(Var::T, rational(1, 1));
        assert_eq!(qt_number(5).eval(&one).unwrap(), rational(5, 1));
    }

    #[test]
    fn factorials() {
        assert_eq!(qt_factorial(0), p("1"));
        assert_eq!(qt_factorial(2), p("t + q"));
        // brute force over S_3: sum of q^inv t^(3 - inv)
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut brute = Polynomial::zero();
        for perm in &perms {
            let inv = inversions(perm);
            brute += Polynomial::term(1, Monomial::from_exponents([(Var::Q, inv), (Var::T, 3 - inv)]));
        }
        assert_eq!(qt_factorial(3), brute);
        assert_eq!(qt_factorial(3), p("(t + q)*(t^2 + t*q + q^2)"));
    }

    #[test]
    fn division_identity_and_symmetry() {
        let t_minus_q = p("t - q");
        for n in 0..=50 {
            let qn = qt_number(n);
            let lhs = &t_minus_q * &qn;
            let rhs = &Polynomial::var(Var::T).pow(n) - &Polynomial::var(Var::Q).pow(n);
            assert_eq!(lhs, rhs, "n = {n}");
            assert_eq!(qn.swap_vars(Var::Q, Var::T), qn);
            if n >= 1 {
                assert!(qn.terms().all(|(m, _)| m.degree() == n - 1));
            }
        }
    }

    #[test]
    fn specialisations() {
        for n in 1..=12u32 {
            let qn = qt_number(n);
            // t = 1 gives the classical q-number 1 + q + ... + q^(n-1)
            let q_number: Polynomial = (0..n).map(|k| Polynomial::var(Var::Q).pow(k)).sum();
            assert_eq!(qn.substitute(Var::T, &Polynomial::one()), q_number);
            assert_eq!(qn.substitute(Var::Q, &Polynomial::zero()), Polynomial::var(Var::T).pow(n - 1));
        }
    }

    #[test]
    fn recurrence_with_t_power() {
        for k in 0..=20 {
            let lhs = &qt_number(k + 1) - &(&Polynomial::var(Var::Q) * &qt_number(k));
            assert_eq!(lhs, Polynomial::var(Var::T).pow(k));
        }
    }
}
