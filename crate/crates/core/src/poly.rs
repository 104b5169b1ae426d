//! Sparse multivariate polynomials over ℤ and reduced fractions of them.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so the largest
//! key is the lexicographic leading term. Greatest common divisors are
//! computed recursively: content with respect to one variable, then a
//! primitive pseudo-remainder sequence in that variable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Poly {
        let c = c.into();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        Poly::monomial(nvars, &{
            let mut e = vec![0; nvars];
            e[i] = 1;
            e
        }, BigInt::one())
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: BigInt) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// A single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(self.nvars, &qe, qc);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    fn uses(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Coefficients with respect to `x_v`, lowest degree first.
    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Sign-normalized: positive leading coefficient.
    fn normalized(self) -> Poly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self,
        }
    }

    fn content_in(&self, v: usize) -> Poly {
        self.coeffs_in(v).iter().fold(Poly::zero(self.nvars), |g, c| gcd(&g, c))
    }

    fn shift(&self, v: usize, k: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] += k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    fn pseudo_rem(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v).unwrap_or(0);
        let lb = b.coeffs_in(v).pop().expect("nonzero divisor");
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(v).unwrap_or(0);
            if dr < db {
                break;
            }
            let lr = r.coeffs_in(v).pop().unwrap();
            r = r.mul(&lb).sub(&lr.mul(&b.shift(v, dr - db)));
        }
        r
    }

    pub fn eval_i64(&self, point: &[i64]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.clone(), |acc, (&k, &x)| acc * BigInt::from(x).pow(k)))
            .sum()
    }
}

/// Greatest common divisor with positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone().normalized();
    }
    if b.is_zero() {
        return a.clone().normalized();
    }
    let n = a.nvars;
    let var = (0..n).rev().find(|&v| a.uses(v) || b.uses(v));
    let Some(v) = var else {
        let g = a.integer_content().gcd(&b.integer_content());
        return Poly::constant(n, g);
    };
    match (a.uses(v), b.uses(v)) {
        (true, false) => return gcd(&a.content_in(v), b),
        (false, true) => return gcd(a, &b.content_in(v)),
        _ => {}
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.pseudo_rem(&q, v);
        p = q;
        q = if r.is_zero() { r } else { r.div_exact(&r.content_in(v)).expect("content divides") };
    }
    let pp = p.div_exact(&p.content_in(v)).expect("content divides");
    c.mul(&pp).normalized()
}

impl Poly {
    /// Renders with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { names[i].clone() } else { format!("{}^{}", names[i], x) })
                .collect();
            let abs = c.abs();
            if k == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{abs}*{}", mono.join("*")));
            }
        }
        out
    }
}

pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_names(self.nvars)))
    }
}

/// A reduced fraction `num / den`: coprime, `den` with positive leading
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentExpr {
    pub num: Poly,
    pub den: Poly,
}

impl LaurentExpr {
    pub fn new(num: Poly, den: Poly) -> LaurentExpr {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let n = num.nvars;
            return LaurentExpr { num, den: Poly::one(n) };
        }
        let g = gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        LaurentExpr { num, den }
    }

    pub fn from_poly(p: Poly) -> LaurentExpr {
        let n = p.nvars;
        LaurentExpr { num: p, den: Poly::one(n) }
    }

    pub fn var(nvars: usize, i: usize) -> LaurentExpr {
        LaurentExpr::from_poly(Poly::var(nvars, i))
    }

    pub fn one(nvars: usize) -> LaurentExpr {
        LaurentExpr::from_poly(Poly::one(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn mul(&self, o: &LaurentExpr) -> LaurentExpr {
        LaurentExpr::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn add(&self, o: &LaurentExpr) -> LaurentExpr {
        if self.den == o.den {
            return LaurentExpr::new(self.num.add(&o.num), self.den.clone());
        }
        LaurentExpr::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &LaurentExpr) -> LaurentExpr {
        assert!(!o.num.is_zero(), "division by zero");
        LaurentExpr::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn pow(&self, k: u32) -> LaurentExpr {
        LaurentExpr { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// The reduced denominator is a monomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }
}

impl LaurentExpr {
    pub fn render(&self, names: &[String]) -> String {
        let wrap = |p: &Poly| if p.len() > 1 { format!("({})", p.render(names)) } else { p.render(names) };
        if self.den.is_one() {
            self.num.render(names)
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Display for LaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_names(self.nvars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    #[test]
    fn display_and_arith() {
        let p = x(0).add(&x(1)).mul(&x(0).sub(&x(1)));
        assert_eq!(p.to_string(), "x1^2 - x2^2");
        assert_eq!(p.div_exact(&x(0).add(&x(1))).unwrap(), x(0).sub(&x(1)));
        assert!(p.div_exact(&x(2)).is_none());
        assert_eq!(Poly::constant(3, -4).to_string(), "-4");
    }

    #[test]
    fn gcd_examples() {
        let a = x(0).add(&x(1)).mul(&x(2).add(&Poly::one(3))).scale(&BigInt::from(6));
        let b = x(0).add(&x(1)).mul(&x(0).sub(&x(2))).scale(&BigInt::from(-4));
        assert_eq!(gcd(&a, &b), x(0).add(&x(1)).scale(&BigInt::from(2)));
        assert_eq!(gcd(&x(0), &x(1)), Poly::one(3));
        assert_eq!(gcd(&Poly::zero(3), &x(1).neg()), x(1));
    }

    #[test]
    fn laurent_reduction() {
        let e = LaurentExpr::new(x(0).mul(&x(1)).add(&x(0)), x(0).mul(&x(2)));
        assert_eq!(e.to_string(), "(x2 + 1)/x3");
        assert!(e.is_laurent());
        let f = LaurentExpr::new(Poly::one(3), x(0).add(&x(1)));
        assert!(!f.is_laurent());
        assert_eq!(f.mul(&LaurentExpr::from_poly(x(0).add(&x(1)))), LaurentExpr::one(3));
        let neg = LaurentExpr::new(x(0), x(1).neg());
        assert_eq!(neg.to_string(), "-x1/x2");
    }
}
