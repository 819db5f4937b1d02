//! Arithmetic in small finite fields GF(p^m), p^m <= 256.
//!
//! Elements are encoded as integers in `[0, p^m)`: the base-p digits of the
//! integer are the coordinates in the polynomial basis `1, a, a^2, ...` where
//! `a` is a root of the defining irreducible polynomial. Multiplication is
//! defined by polynomial arithmetic modulo that polynomial; log/antilog tables
//! built at construction make it O(1).

use std::fmt;

use crate::error::{Error, Result};

/// Element of a [`Field`], stored as its integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps a raw encoding. The caller guarantees it is below the field order.
    pub const fn from_raw(v: u8) -> Self {
        FieldElem(v)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub const fn is_one(self) -> bool {
        self.0 == 1
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^m) with a caller-supplied monic irreducible modulus.
#[derive(Clone)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    neg: Vec<u8>,
    exp: Vec<u8>,
    log: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Digits of `v` in base `p`, least significant first, padded to `m`.
fn digits(v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut v = v;
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Remainder of `a` modulo `b` over GF(p); both low degree first, `b` monic.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (k, &bc) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p * p - lead * bc % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// True when the monic polynomial `f` (low degree first) has no factor of
/// degree between 1 and deg(f)/2, checked by trial division against every
/// monic polynomial of those degrees.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = digits(low, p, d as u32);
            cand.push(1);
            if poly_rem(f, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^m) from `irreducible` = (c_0, ..., c_m), low degree first.
    pub fn new(p: u32, m: u32, irreducible: &[u32]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= 256)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{m} exceeds 256")))?;
        if irreducible.len() != m as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus needs {} coefficients, got {}",
                m + 1,
                irreducible.len()
            )));
        }
        if irreducible.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if irreducible[m as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !is_irreducible(irreducible, p) {
            return Err(Error::InvalidField(format!(
                "{irreducible:?} is reducible over GF({p})"
            )));
        }

        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        for a in 0..q {
            let da = digits(a, p, m);
            let na: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = undigits(&na, p) as u8;
            for b in 0..q {
                let db = digits(b, p, m);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = undigits(&s, p) as u8;
            }
        }

        let mut field = Field {
            p,
            m,
            q,
            modulus: irreducible.to_vec(),
            add,
            neg,
            exp: Vec::new(),
            log: Vec::new(),
        };

        // The modulus need not be primitive, so search for a generator of the
        // multiplicative group using plain polynomial multiplication.
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| field.poly_order(g) == order)
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u8; 2 * order as usize];
        let mut log = vec![0u16; qs];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x as u8;
            exp[(k + order) as usize] = x as u8;
            log[x as usize] = k as u16;
            x = field.poly_mul(x, generator);
        }
        field.exp = exp;
        field.log = log;
        Ok(field)
    }

    /// Reference multiplication by polynomial arithmetic modulo the modulus.
    pub fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let (p, m) = (self.p, self.m);
        let da = digits(a, p, m);
        let db = digits(b, p, m);
        let mut prod = vec![0u32; 2 * m as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, p);
        let mut r = r;
        r.resize(m as usize, 0);
        undigits(&r, p)
    }

    fn poly_order(&self, g: u32) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = self.poly_mul(x, g);
            k += 1;
        }
        k
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements q = p^m.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with the given encoding, or an error if it is out of range.
    pub fn elem(&self, v: u32) -> Result<FieldElem> {
        if v < self.q {
            Ok(FieldElem(v as u8))
        } else {
            Err(Error::InvalidElement { value: v, order: self.q })
        }
    }

    /// All elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(|v| FieldElem(v as u8))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let k = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElem(self.exp[k])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let order = (self.q - 1) as usize;
        let k = (order - self.log[a.0 as usize] as usize) % order;
        Ok(FieldElem(self.exp[k]))
    }

    /// `a / b`. Panics if `b` is zero; use [`Field::inv`] for a checked path.
    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        assert!(!b.is_zero(), "division by zero in GF({})", self.q);
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let order = (self.q - 1) as usize;
        let k = self.log[a.0 as usize] as usize + order - self.log[b.0 as usize] as usize;
        FieldElem(self.exp[k])
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        FieldElem(self.exp[k as usize])
    }
}
