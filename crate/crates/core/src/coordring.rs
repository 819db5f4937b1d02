//! Arithmetic in L(∞Q) = F_q[x_1] y_0 ⊕ ... ⊕ F_q[x_1] y_{a_1-1}.
//!
//! Products are formed by multiplying the x_1-coefficient polynomials
//! symbolically and substituting the precomputed normal forms of y_i y_j.
//! Every routine that performs field multiplications or divisions takes a
//! [`CostCounter`] and records both the operations it actually executed
//! (multiplications by the literal 1 are skipped) and the closed-form upper
//! bound for the same step.

use std::fmt;
use std::ops::AddAssign;

use crate::curve::{CurveData, MPoly, Semigroup};
use crate::error::Result;
use crate::gf::{Field, FieldElem};

/// Field operation counts. Monotone; merge by summation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CostCounter {
    pub muls: u64,
    pub divs: u64,
    /// Sum of the closed-form upper bounds for the same steps.
    pub bound: u64,
}

impl CostCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Executed multiplications plus divisions.
    pub fn total(&self) -> u64 {
        self.muls + self.divs
    }

    #[inline]
    pub(crate) fn mul(&mut self, field: &Field, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_one() {
            b
        } else if b.is_one() {
            a
        } else {
            self.muls += 1;
            field.mul(a, b)
        }
    }

    #[inline]
    pub(crate) fn div(&mut self, field: &Field, a: FieldElem, b: FieldElem) -> FieldElem {
        self.divs += 1;
        field.div(a, b)
    }
}

impl AddAssign for CostCounter {
    fn add_assign(&mut self, rhs: Self) {
        self.muls += rhs.muls;
        self.divs += rhs.divs;
        self.bound += rhs.bound;
    }
}

/// Element of L(∞Q) in normal form: `comps[j]` holds the coefficients of the
/// x_1-polynomial multiplying y_j, low degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    comps: Vec<Vec<FieldElem>>,
}

fn trim(p: &mut Vec<FieldElem>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

impl RingElem {
    pub fn zero(a1: usize) -> RingElem {
        RingElem { comps: vec![Vec::new(); a1] }
    }

    /// c * x_1^k * y_j.
    pub fn monomial(a1: usize, k: u32, j: usize, c: FieldElem) -> RingElem {
        let mut e = RingElem::zero(a1);
        if !c.is_zero() {
            let mut p = vec![FieldElem::ZERO; k as usize + 1];
            p[k as usize] = c;
            e.comps[j] = p;
        }
        e
    }

    pub fn from_components(mut comps: Vec<Vec<FieldElem>>) -> RingElem {
        comps.iter_mut().for_each(trim);
        RingElem { comps }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_empty())
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    /// x_1-polynomial multiplying y_j.
    pub fn component(&self, j: usize) -> &[FieldElem] {
        &self.comps[j]
    }

    pub fn coeff(&self, k: u32, j: usize) -> FieldElem {
        self.comps[j].get(k as usize).copied().unwrap_or(FieldElem::ZERO)
    }

    /// Degree in x_1 of component j, `None` if that component is zero.
    pub fn degree(&self, j: usize) -> Option<u32> {
        self.comps[j].len().checked_sub(1).map(|d| d as u32)
    }

    /// Nonzero terms as (k, j, coeff).
    pub fn terms(&self) -> impl Iterator<Item = (u32, usize, FieldElem)> + '_ {
        self.comps.iter().enumerate().flat_map(|(j, p)| {
            p.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(k, &c)| (k as u32, j, c))
        })
    }

    /// Number of nonzero terms.
    pub fn gamma(&self) -> usize {
        self.comps.iter().map(|p| p.iter().filter(|c| !c.is_zero()).count()).sum()
    }

    /// Number of nonzero terms whose coefficient is not 1.
    pub fn gamma_ne1(&self) -> usize {
        self.comps
            .iter()
            .map(|p| p.iter().filter(|c| !c.is_zero() && !c.is_one()).count())
            .sum()
    }

    /// Multiplies by x_1^k.
    pub fn shift_x1(&self, k: u32) -> RingElem {
        let comps = self
            .comps
            .iter()
            .map(|p| {
                if p.is_empty() {
                    Vec::new()
                } else {
                    let mut q = vec![FieldElem::ZERO; k as usize];
                    q.extend_from_slice(p);
                    q
                }
            })
            .collect();
        RingElem { comps }
    }

    pub(crate) fn add_term(&mut self, field: &Field, k: u32, j: usize, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let p = &mut self.comps[j];
        let k = k as usize;
        if p.len() <= k {
            p.resize(k + 1, FieldElem::ZERO);
        }
        p[k] = field.add(p[k], c);
        trim(p);
    }

    /// `self += c * x_1^shift * other`. Executed scalings by c are charged
    /// to `ctr`; the caller accounts for the bound.
    pub fn add_scaled(&mut self, field: &Field, other: &RingElem, c: FieldElem, shift: u32, ctr: &mut CostCounter) {
        if c.is_zero() {
            return;
        }
        for (j, q) in other.comps.iter().enumerate() {
            if q.is_empty() {
                continue;
            }
            let p = &mut self.comps[j];
            let need = q.len() + shift as usize;
            if p.len() < need {
                p.resize(need, FieldElem::ZERO);
            }
            for (k, &b) in q.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let v = ctr.mul(field, c, b);
                let slot = &mut p[k + shift as usize];
                *slot = field.add(*slot, v);
            }
            trim(p);
        }
    }

    pub fn add(&self, field: &Field, other: &RingElem) -> RingElem {
        let mut out = self.clone();
        out.add_scaled(field, other, FieldElem::ONE, 0, &mut CostCounter::new());
        out
    }

    pub fn sub(&self, field: &Field, other: &RingElem) -> RingElem {
        let mut out = self.clone();
        out.add_scaled(field, other, field.neg(FieldElem::ONE), 0, &mut CostCounter::new());
        out
    }

    /// Negation; characteristic-2 fields make this free, otherwise it is a
    /// sign flip and not a counted multiplication.
    pub fn neg(&self, field: &Field) -> RingElem {
        RingElem {
            comps: self
                .comps
                .iter()
                .map(|p| p.iter().map(|&c| field.neg(c)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(u32, usize, FieldElem)> = self.terms().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.reverse();
        let parts: Vec<String> = terms.iter().map(|(k, j, c)| format!("{c}*x1^{k}*y{j}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Quotient failure: the dividend is not in the principal ideal of the divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotDivisible;

/// Normal forms of y_i y_j and their leading coefficients.
#[derive(Clone, Debug)]
pub struct MultTable {
    entries: Vec<Vec<RingElem>>,
    lc: Vec<Vec<FieldElem>>,
    gamma_ne1: Vec<Vec<u64>>,
}

impl MultTable {
    pub fn entry(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i][j]
    }

    /// lc(y_i y_j).
    pub fn lc(&self, i: usize, j: usize) -> FieldElem {
        self.lc[i][j]
    }
}

/// The coordinate ring with everything needed for normal-form arithmetic.
#[derive(Clone, Debug)]
pub struct CoordRing {
    pub curve: CurveData,
    pub semigroup: Semigroup,
    pub table: MultTable,
    a1: usize,
    /// point_basis[p][j][k] = x_1(P_p)^k * y_j(P_p).
    point_basis: Vec<Vec<Vec<FieldElem>>>,
}

impl CoordRing {
    pub fn new(curve: CurveData) -> Result<CoordRing> {
        let semigroup = Semigroup::compute(&curve)?;
        let a1 = semigroup.a1 as usize;
        let mut ring = CoordRing {
            curve,
            semigroup,
            table: MultTable { entries: Vec::new(), lc: Vec::new(), gamma_ne1: Vec::new() },
            a1,
            point_basis: Vec::new(),
        };
        ring.table = ring.build_mult_table();
        ring.point_basis = ring.build_point_basis();
        Ok(ring)
    }

    pub fn field(&self) -> &Field {
        &self.curve.field
    }

    pub fn a1(&self) -> usize {
        self.a1
    }

    pub fn n(&self) -> usize {
        self.curve.n()
    }

    pub fn zero(&self) -> RingElem {
        RingElem::zero(self.a1)
    }

    pub fn one(&self) -> RingElem {
        RingElem::monomial(self.a1, 0, 0, FieldElem::ONE)
    }

    /// y_i as a ring element.
    pub fn y(&self, i: usize) -> RingElem {
        RingElem::monomial(self.a1, 0, i, FieldElem::ONE)
    }

    /// phi_s, the basis monomial of pole order s.
    pub fn phi(&self, s: i64) -> Result<RingElem> {
        let (k, j) = self.semigroup.phi(s)?;
        Ok(RingElem::monomial(self.a1, k, j, FieldElem::ONE))
    }

    /// Leading term (k, j, coeff) w.r.t. pole order.
    pub fn leading(&self, f: &RingElem) -> Option<(u32, usize, FieldElem)> {
        (0..self.a1)
            .filter_map(|j| f.degree(j).map(|k| (k, j)))
            .max_by_key(|&(k, j)| self.semigroup.pole_order(k, j))
            .map(|(k, j)| (k, j, f.comps[j][k as usize]))
    }

    /// -v_Q(f); `None` stands for -∞ (f = 0).
    pub fn pole_order(&self, f: &RingElem) -> Option<u32> {
        self.leading(f).map(|(k, j, _)| self.semigroup.pole_order(k, j))
    }

    /// Pole orders of the nonzero terms of f.
    pub fn support(&self, f: &RingElem) -> Vec<u32> {
        let mut s: Vec<u32> = f.terms().map(|(k, j, _)| self.semigroup.pole_order(k, j)).collect();
        s.sort_unstable();
        s
    }

    /// Normal form of an X-polynomial, re-indexed on the basis x_1^k y_j.
    pub fn normal_form(&self, poly: &MPoly) -> RingElem {
        let red = self.curve.reduce(poly);
        let mut out = self.zero();
        for (m, &c) in &red.terms {
            let j = (m.weight % self.a1 as u32) as usize;
            debug_assert_eq!(m.exps[1..], self.semigroup.apery_monomials[j][1..]);
            out.add_term(self.field(), m.exps[0], j, c);
        }
        out
    }

    /// The X-polynomial obtained by writing each x_1^k y_j as a monomial.
    pub fn to_mpoly(&self, f: &RingElem) -> MPoly {
        let mut out = MPoly::zero();
        for (k, j, c) in f.terms() {
            let mut exps = self.semigroup.apery_monomials[j].clone();
            exps[0] += k;
            out.add_term(self.field(), self.curve.monomial(exps), c);
        }
        out
    }

    fn build_mult_table(&self) -> MultTable {
        let a1 = self.a1;
        let mut entries = vec![vec![self.zero(); a1]; a1];
        let mut lc = vec![vec![FieldElem::ZERO; a1]; a1];
        let mut gne1 = vec![vec![0; a1]; a1];
        for i in 0..a1 {
            for j in 0..a1 {
                let p = self.to_mpoly(&self.y(i)).mul(self.field(), &self.to_mpoly(&self.y(j)));
                let nf = self.normal_form(&p);
                lc[i][j] = self.leading(&nf).expect("y_i y_j is nonzero").2;
                gne1[i][j] = nf.gamma_ne1() as u64;
                entries[i][j] = nf;
            }
        }
        MultTable { entries, lc, gamma_ne1: gne1 }
    }

    /// Largest x_1 exponent kept in the per-point evaluation table.
    fn basis_table_degree(&self) -> usize {
        let sg = &self.semigroup;
        let top = 2 * (self.n() as u32 + 2 * sg.genus() + sg.apery.iter().max().unwrap() + sg.a1);
        (top / sg.a1) as usize + 1
    }

    fn build_point_basis(&self) -> Vec<Vec<Vec<FieldElem>>> {
        let field = self.field();
        let kmax = self.basis_table_degree();
        self.curve
            .points
            .iter()
            .map(|pt| {
                let x1 = pt[0];
                (0..self.a1)
                    .map(|j| {
                        let yj = self.to_mpoly(&self.y(j)).eval(field, pt);
                        let mut row = Vec::with_capacity(kmax + 1);
                        let mut v = yj;
                        for _ in 0..=kmax {
                            row.push(v);
                            v = field.mul(v, x1);
                        }
                        row
                    })
                    .collect()
            })
            .collect()
    }

    #[inline]
    fn basis_value(&self, point: usize, k: u32, j: usize) -> FieldElem {
        let row = &self.point_basis[point][j];
        match row.get(k as usize) {
            Some(&v) => v,
            None => {
                let x1 = self.curve.points[point][0];
                let last = row.len() - 1;
                let extra = self.field().pow(x1, (k as usize - last) as u64);
                self.field().mul(row[last], extra)
            }
        }
    }

    /// f(P_point), not counted.
    pub fn eval_at(&self, f: &RingElem, point: usize) -> FieldElem {
        let field = self.field();
        f.terms().fold(FieldElem::ZERO, |acc, (k, j, c)| {
            field.add(acc, field.mul(c, self.basis_value(point, k, j)))
        })
    }

    /// ev(f) without cost accounting.
    pub fn ev(&self, f: &RingElem) -> Vec<FieldElem> {
        (0..self.n()).map(|p| self.eval_at(f, p)).collect()
    }

    /// ev(f) with one multiplication per point and non-unit coefficient;
    /// bounded by n * gamma(f).
    pub fn ev_counted(&self, f: &RingElem, ctr: &mut CostCounter) -> Vec<FieldElem> {
        let field = self.field();
        ctr.bound += (self.n() * f.gamma()) as u64;
        let terms: Vec<(u32, usize, FieldElem)> = f.terms().collect();
        (0..self.n())
            .map(|p| {
                terms.iter().fold(FieldElem::ZERO, |acc, &(k, j, c)| {
                    field.add(acc, ctr.mul(field, c, self.basis_value(p, k, j)))
                })
            })
            .collect()
    }

    /// Closed-form bound on the multiplications of [`CoordRing::mul`]:
    /// gamma(g) gamma(h) + sum_{i,j} gamma(F_ij) gamma_ne1(y_i y_j).
    pub fn mul_bound(&self, g: &RingElem, h: &RingElem) -> u64 {
        let field = self.field();
        let mut bound = (g.gamma() * h.gamma()) as u64;
        for i in 0..self.a1 {
            if g.comps[i].is_empty() {
                continue;
            }
            for j in 0..self.a1 {
                if h.comps[j].is_empty() || self.table.gamma_ne1[i][j] == 0 {
                    continue;
                }
                let f = poly_mul(field, &g.comps[i], &h.comps[j], &mut CostCounter::new());
                let gf = f.iter().filter(|c| !c.is_zero()).count() as u64;
                bound += gf * self.table.gamma_ne1[i][j];
            }
        }
        bound
    }

    /// Normal form of g h.
    pub fn mul(&self, g: &RingElem, h: &RingElem, ctr: &mut CostCounter) -> RingElem {
        let field = self.field();
        ctr.bound += (g.gamma() * h.gamma()) as u64;
        let mut out = self.zero();
        for i in 0..self.a1 {
            if g.comps[i].is_empty() {
                continue;
            }
            for j in 0..self.a1 {
                if h.comps[j].is_empty() {
                    continue;
                }
                let f = poly_mul(field, &g.comps[i], &h.comps[j], ctr);
                let entry = &self.table.entries[i][j];
                let gne1 = self.table.gamma_ne1[i][j];
                if gne1 > 0 {
                    ctr.bound += f.iter().filter(|c| !c.is_zero()).count() as u64 * gne1;
                }
                for (k, q) in entry.comps.iter().enumerate() {
                    if q.is_empty() {
                        continue;
                    }
                    let p = &mut out.comps[k];
                    let need = f.len() + q.len() - 1;
                    if p.len() < need {
                        p.resize(need, FieldElem::ZERO);
                    }
                    for (e, &c) in f.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (d, &t) in q.iter().enumerate() {
                            if t.is_zero() {
                                continue;
                            }
                            let v = ctr.mul(field, c, t);
                            p[e + d] = field.add(p[e + d], v);
                        }
                    }
                }
            }
        }
        out.comps.iter_mut().for_each(trim);
        out
    }

    /// g / h by long division in L(∞Q). Each round removes the leading term
    /// of the remainder with t * phi_s, t = lc(g) / (lc(h) lc(phi_s lm(h))).
    pub fn quot(&self, g: &RingElem, h: &RingElem, ctr: &mut CostCounter) -> Result<RingElem, NotDivisible> {
        let field = self.field();
        let sg = &self.semigroup;
        let (hk, hj, hc) = self.leading(h).expect("division by zero ring element");
        let hp = sg.pole_order(hk, hj);
        let mut sigma = self.zero();
        let mut rem = g.clone();
        while let Some((gk, gj, gc)) = self.leading(&rem) {
            let gp = sg.pole_order(gk, gj);
            if gp < hp || !sg.is_nongap((gp - hp) as i64) {
                return Err(NotDivisible);
            }
            let (k, j) = sg.phi((gp - hp) as i64).expect("checked nongap");
            let denom = ctr.mul(field, hc, self.table.lc[j][hj]);
            let t = ctr.div(field, gc, denom);
            ctr.bound += 2;
            let tphi = RingElem::monomial(self.a1, k, j, t);
            let prod = self.mul(&tphi, h, ctr);
            rem.add_scaled(field, &prod, field.neg(FieldElem::ONE), 0, &mut CostCounter::new());
            debug_assert!(self.pole_order(&rem).is_none_or(|p| p < gp));
            sigma.add_term(field, k, j, t);
        }
        Ok(sigma)
    }
}

/// Product of two x_1-polynomials, one counted multiplication per pair of
/// nonzero non-unit coefficients.
fn poly_mul(field: &Field, a: &[FieldElem], b: &[FieldElem], ctr: &mut CostCounter) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let v = ctr.mul(field, x, y);
            out[i + j] = field.add(out[i + j], v);
        }
    }
    trim(&mut out);
    out
}
