//! One-point codes C_Γ = span{ev(φ_s) | s ∈ Γ}, the evaluation basis ψ, the
//! interpolation matrix M and the Gröbner basis {η_i} of L(-D + ∞Q).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coordring::{CoordRing, CostCounter, RingElem};
use crate::curve::CurveData;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

/// The pole orders Ĥ(Q) whose monomials have independent evaluation
/// vectors, their evaluation matrix and its inverse.
#[derive(Clone, Debug)]
pub struct EvalSystem {
    /// Ĥ(Q), increasing.
    pub hhat: Vec<u32>,
    /// psi_eval[i][p] = ψ_i(P_p) with ψ_i = φ_{hhat[i]}.
    pub psi_eval: Vec<Vec<FieldElem>>,
    /// M = psi_eval⁻¹, so the coefficient of ψ_i in h_r is Σ_p r_p M[p][i].
    pub minv: Vec<Vec<FieldElem>>,
}

/// η_i with lm(η_i) = x_1^k y_i, k minimal, monic and vanishing on every point.
#[derive(Clone, Debug)]
pub struct EtaBasis {
    pub eta: Vec<RingElem>,
    pub pole: Vec<u32>,
}

/// Everything about a curve that does not depend on the choice of Γ.
#[derive(Clone, Debug)]
pub struct CodeFamily {
    pub ring: CoordRing,
    pub eval: EvalSystem,
    pub eta: EtaBasis,
}

/// A concrete code C_Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub gamma: Vec<u32>,
    pub dim: usize,
    pub dag: u32,
    pub generators: Vec<Vec<FieldElem>>,
}

/// A code bundled with the family it belongs to.
#[derive(Clone, Debug)]
pub struct AgCode {
    pub family: Arc<CodeFamily>,
    pub spec: CodeSpec,
}

struct EchelonRow {
    pivot: usize,
    row: Vec<FieldElem>,
    combo: RingElem,
}

impl CodeFamily {
    pub fn new(curve: CurveData) -> Result<CodeFamily> {
        let ring = CoordRing::new(curve)?;
        let (eval, eta) = scan_evaluations(&ring)?;
        Ok(CodeFamily { ring, eval, eta })
    }

    pub fn bundled(name: &str) -> Result<CodeFamily> {
        let curve = CurveData::bundled(name)
            .ok_or_else(|| Error::InvalidConfig(format!("no bundled curve named {name}")))?;
        CodeFamily::new(curve)
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }

    pub fn max_hhat(&self) -> u32 {
        *self.eval.hhat.last().unwrap()
    }

    pub fn in_hhat(&self, s: u32) -> bool {
        self.eval.hhat.binary_search(&s).is_ok()
    }

    /// ν(s) for a nongap s.
    pub fn nu(&self, s: u32) -> u32 {
        self.ring.semigroup.nu(s, &self.eta.pole)
    }

    /// λ(s) = #{j ∈ H(Q) | j + s ∈ Ĥ(Q)}.
    pub fn lambda(&self, s: u32) -> u32 {
        self.ring.semigroup.lambda(s, &self.eval.hhat)
    }

    /// Feng–Rao improved Γ = {s ∈ Ĥ(Q) | ν(s) ≥ δ}.
    pub fn improved_gamma(&self, delta: u32) -> Result<CodeSpec> {
        let gamma: Vec<u32> = self.eval.hhat.iter().copied().filter(|&s| self.nu(s) >= delta).collect();
        if gamma.is_empty() {
            return Err(Error::EmptyGamma(delta));
        }
        Ok(self.spec_for(gamma))
    }

    /// Γ supplied explicitly; every entry must lie in Ĥ(Q).
    pub fn explicit_gamma(&self, gamma: &[u32]) -> Result<CodeSpec> {
        let mut g = gamma.to_vec();
        g.sort_unstable();
        g.dedup();
        if let Some(&bad) = g.iter().find(|&&s| !self.in_hhat(s)) {
            return Err(Error::InvalidGamma(bad));
        }
        if g.is_empty() {
            return Err(Error::InvalidConfig("empty gamma list".into()));
        }
        Ok(self.spec_for(g))
    }

    fn spec_for(&self, gamma: Vec<u32>) -> CodeSpec {
        let dag = gamma.iter().map(|&s| self.nu(s)).min().unwrap();
        let generators = gamma
            .iter()
            .map(|&s| {
                let i = self.eval.hhat.binary_search(&s).unwrap();
                self.eval.psi_eval[i].clone()
            })
            .collect();
        CodeSpec { dim: gamma.len(), gamma, dag, generators }
    }

    /// h_r = Σ_i c_i ψ_i with ev(h_r) = r. At most n² counted multiplications.
    pub fn interpolate(&self, r: &[FieldElem], ctr: &mut CostCounter) -> RingElem {
        let field = self.field();
        let n = self.n();
        ctr.bound += (n * n) as u64;
        let mut coef = vec![FieldElem::ZERO; n];
        for (p, &rp) in r.iter().enumerate() {
            if rp.is_zero() {
                continue;
            }
            for (i, c) in coef.iter_mut().enumerate() {
                let m = self.eval.minv[p][i];
                if !m.is_zero() {
                    *c = field.add(*c, ctr.mul(field, rp, m));
                }
            }
        }
        let mut h = self.ring.zero();
        for (i, &c) in coef.iter().enumerate() {
            if !c.is_zero() {
                let (k, j) = self.ring.semigroup.phi(self.eval.hhat[i] as i64).unwrap();
                h.add_term(field, k, j, c);
            }
        }
        h
    }
}

/// Scans nongaps in increasing order, reducing ev(φ_s) against the rows
/// kept so far. An independent row puts s in Ĥ(Q); the first dependency in
/// residue class i yields η_i.
fn scan_evaluations(ring: &CoordRing) -> Result<(EvalSystem, EtaBasis)> {
    let field = ring.field();
    let sg = &ring.semigroup;
    let n = ring.n();
    let a1 = ring.a1();
    let bound = n as u32 + 2 * sg.genus() + sg.apery.iter().max().unwrap();

    let mut echelon: Vec<EchelonRow> = Vec::with_capacity(n);
    let mut hhat = Vec::with_capacity(n);
    let mut psi_eval = Vec::with_capacity(n);
    let mut eta: Vec<Option<RingElem>> = vec![None; a1];

    for s in sg.nongaps_up_to(bound) {
        if hhat.len() == n && eta.iter().all(Option::is_some) {
            break;
        }
        let phi = ring.phi(s as i64)?;
        let ev = ring.ev(&phi);
        let mut row = ev.clone();
        let mut combo = phi;
        for e in &echelon {
            let c = row[e.pivot];
            if c.is_zero() {
                continue;
            }
            let neg = field.neg(c);
            for (x, &y) in row.iter_mut().zip(&e.row) {
                *x = field.add(*x, field.mul(neg, y));
            }
            combo.add_scaled(field, &e.combo, neg, 0, &mut CostCounter::new());
        }
        match row.iter().position(|c| !c.is_zero()) {
            Some(pivot) => {
                let inv = field.inv(row[pivot])?;
                row.iter_mut().for_each(|x| *x = field.mul(*x, inv));
                let scaled = {
                    let mut z = ring.zero();
                    z.add_scaled(field, &combo, inv, 0, &mut CostCounter::new());
                    z
                };
                echelon.push(EchelonRow { pivot, row, combo: scaled });
                hhat.push(s);
                psi_eval.push(ev);
            }
            None => {
                let class = (s % sg.a1) as usize;
                if eta[class].is_none() {
                    eta[class] = Some(combo);
                }
            }
        }
    }

    if hhat.len() < n {
        return Err(Error::RankDeficient { found: hhat.len(), needed: n, bound });
    }
    if let Some(class) = eta.iter().position(Option::is_none) {
        return Err(Error::SearchBoundExceeded { class, bound });
    }
    let eta: Vec<RingElem> = eta.into_iter().map(Option::unwrap).collect();
    let pole = eta.iter().map(|e| ring.pole_order(e).unwrap()).collect();
    let minv = invert(field, &psi_eval).ok_or(Error::RankDeficient { found: n - 1, needed: n, bound })?;
    Ok((EvalSystem { hhat, psi_eval, minv }, EtaBasis { eta, pole }))
}

/// Gauss–Jordan inverse of a square matrix.
fn invert(field: &Field, a: &[Vec<FieldElem>]) -> Option<Vec<Vec<FieldElem>>> {
    let n = a.len();
    let mut m: Vec<Vec<FieldElem>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FieldElem::ONE } else { FieldElem::ZERO }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = field.inv(m[col][col]).ok()?;
        m[col].iter_mut().for_each(|x| *x = field.mul(*x, inv));
        let prow = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            let c = row[col];
            if r == col || c.is_zero() {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&prow) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl AgCode {
    pub fn new(family: Arc<CodeFamily>, spec: CodeSpec) -> AgCode {
        AgCode { family, spec }
    }

    pub fn with_delta(family: Arc<CodeFamily>, delta: u32) -> Result<AgCode> {
        let spec = family.improved_gamma(delta)?;
        Ok(AgCode { family, spec })
    }

    pub fn field(&self) -> &Field {
        self.family.field()
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    /// Σ_s w_s φ_s for a message aligned with Γ.
    pub fn message_function(&self, msg: &[FieldElem]) -> RingElem {
        let ring = &self.family.ring;
        let mut f = ring.zero();
        for (&s, &c) in self.spec.gamma.iter().zip(msg) {
            let (k, j) = ring.semigroup.phi(s as i64).unwrap();
            f.add_term(ring.field(), k, j, c);
        }
        f
    }

    /// ev(Σ_s w_s φ_s).
    pub fn encode(&self, msg: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(msg.len(), self.spec.dim, "message length must equal #Γ");
        let field = self.field();
        let mut word = vec![FieldElem::ZERO; self.n()];
        for (row, &c) in self.spec.generators.iter().zip(msg) {
            if c.is_zero() {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(row) {
                *w = field.add(*w, field.mul(c, g));
            }
        }
        word
    }

    /// Recovers the message of a codeword, `None` if the word is not in C_Γ.
    pub fn unencode(&self, word: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let h = self.family.interpolate(word, &mut CostCounter::new());
        let ring = &self.family.ring;
        let mut msg = Vec::with_capacity(self.spec.dim);
        let mut used = 0;
        for &s in &self.spec.gamma {
            let (k, j) = ring.semigroup.phi(s as i64).unwrap();
            let c = h.coeff(k, j);
            used += usize::from(!c.is_zero());
            msg.push(c);
        }
        (used == h.gamma()).then_some(msg)
    }

    pub fn is_codeword(&self, word: &[FieldElem]) -> bool {
        self.unencode(word).is_some()
    }
}

/// Hamming distance.
pub fn distance(a: &[FieldElem], b: &[FieldElem]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Whitespace-separated decimal field elements.
pub fn parse_word(field: &Field, text: &str, n: usize) -> Result<Vec<FieldElem>> {
    let word = text
        .split_whitespace()
        .map(|t| {
            let v: u32 = t.parse().map_err(|_| Error::InvalidWord(format!("not a number: {t}")))?;
            field.elem(v)
        })
        .collect::<Result<Vec<_>>>()?;
    if word.len() != n {
        return Err(Error::InvalidWord(format!("expected {n} symbols, got {}", word.len())));
    }
    Ok(word)
}

pub fn format_word(word: &[FieldElem]) -> String {
    word.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Message as `s value` pairs, one per line or run together; absent pole
/// orders default to zero.
pub fn parse_message(field: &Field, spec: &CodeSpec, text: &str) -> Result<Vec<FieldElem>> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() % 2 != 0 {
        return Err(Error::InvalidWord("message must be a list of `s value` pairs".into()));
    }
    let mut map = BTreeMap::new();
    for pair in toks.chunks(2) {
        let s: u32 = pair[0].parse().map_err(|_| Error::InvalidWord(format!("bad pole order {}", pair[0])))?;
        let v: u32 = pair[1].parse().map_err(|_| Error::InvalidWord(format!("bad value {}", pair[1])))?;
        if spec.gamma.binary_search(&s).is_err() {
            return Err(Error::InvalidGamma(s));
        }
        map.insert(s, field.elem(v)?);
    }
    Ok(spec.gamma.iter().map(|s| map.get(s).copied().unwrap_or(FieldElem::ZERO)).collect())
}

pub fn format_message(spec: &CodeSpec, msg: &[FieldElem]) -> String {
    spec.gamma
        .iter()
        .zip(msg)
        .map(|(s, c)| format!("{s} {c}"))
        .collect::<Vec<_>>()
        .join("\n")
}
