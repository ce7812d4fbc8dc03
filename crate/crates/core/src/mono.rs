//! Monomials in the coordinate functions of the ambient space.

use std::cmp::Ordering;
use std::fmt;

use crate::rat::Rat;
use num_traits::One;

/// Exponent vector of a monomial; index `i` is the power of coordinate `i`.
///
/// Ordered by graded lexicographic order: total degree first, then the
/// exponent vector itself. This is the canonical term order used for
/// rendering and golden-file stability.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(dim: usize) -> Self {
        Mono(vec![0; dim])
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.0.len(), other.0.len());
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Divides by coordinate `i` once, or returns `None` when the power is 0.
    pub fn div_var(&self, i: usize) -> Option<Mono> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(Mono(e))
    }

    pub fn mul_var(&self, i: usize) -> Mono {
        let mut e = self.0.clone();
        e[i] += 1;
        Mono(e)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut acc = Rat::one();
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                acc *= point[i].clone();
            }
        }
        acc
    }

    /// Renders with names, e.g. `x^2*y`; the empty product renders as `1`.
    pub fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.0.len()).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// All monomials in `dim` variables of total degree exactly `deg`,
/// in graded-lex order.
pub fn monomials_of_degree(dim: usize, deg: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; dim];
    fn rec(dim: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if pos + 1 == dim {
            cur[pos] = left;
            out.push(Mono(cur.clone()));
            cur[pos] = 0;
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(dim, pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    if dim == 0 {
        if deg == 0 {
            out.push(Mono(vec![]));
        }
        return out;
    }
    rec(dim, 0, deg, &mut cur, &mut out);
    out.sort();
    out
}

/// Partial derivative of a monomial: returns `(coefficient, monomial)` or
/// `None` when the power of `i` is zero.
pub fn d_mono(m: &Mono, i: usize) -> Option<(Rat, Mono)> {
    let e = m.0[i];
    if e == 0 {
        return None;
    }
    let mut v = m.0.clone();
    v[i] -= 1;
    Some((Rat::from_integer(e.into()), Mono(v)))
}

/// Binomial coefficient as exact arithmetic; used by counting oracles.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Mono(vec![0, 2]); // y^2
        let b = Mono(vec![1, 0]); // x
        assert!(b < a); // degree first
        let c = Mono(vec![2, 0]);
        assert!(a < c); // same degree, lex on exponents
    }

    #[test]
    fn enumeration_counts() {
        // degree-d monomials in k vars: C(d+k-1, k-1)
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(4, 3).len(), binomial(6, 3) as usize);
    }

    #[test]
    fn derivative() {
        let m = Mono(vec![2, 1]);
        let (c, d) = d_mono(&m, 0).unwrap();
        assert_eq!(c, Rat::from_integer(2.into()));
        assert_eq!(d, Mono(vec![1, 1]));
        assert!(d_mono(&Mono(vec![0, 1]), 0).is_none());
    }

    #[test]
    fn zero_is_absorbed_by_eval() {
        let m = Mono(vec![1, 3]);
        let p = [crate::rat::int(0), crate::rat::int(5)];
        use num_traits::Zero;
        assert!(m.eval(&p).is_zero());
    }
}
