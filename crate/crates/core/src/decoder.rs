//! List decoding by pairing, voting and rebasing in Gröbner bases of the
//! module I_r ⊂ L(∞Q)z ⊕ L(∞Q), with three ways of stopping the descent.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::code::{distance, AgCode};
use crate::coordring::{CostCounter, RingElem};
use crate::curve::Monomial;
use crate::error::{Error, Result};
use crate::gf::FieldElem;

/// Termination rule for the descent over s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    /// Try α_0/α_1 at every s ∈ Γ once d_AG(C_{Γ≤s}) > 2τ.
    First,
    /// Try α_0/α_1 once, at the largest s ∈ Γ below n - 2τ - g.
    Second,
    /// Descend to s = -1 and read the message off the votes.
    Third,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::First, Criterion::Second, Criterion::Third];

    pub fn number(self) -> u8 {
        match self {
            Criterion::First => 1,
            Criterion::Second => 2,
            Criterion::Third => 3,
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Criterion> {
        match s.trim() {
            "1" => Ok(Criterion::First),
            "2" => Ok(Criterion::Second),
            "3" => Ok(Criterion::Third),
            other => Err(Error::InvalidConfig(format!("criterion must be 1, 2 or 3, got {other}"))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Monomial x^e z^k of Ω_1, k ∈ {0, 1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaMonomial {
    pub x: Monomial,
    pub z: bool,
}

/// The order <_s: compare k*s - v_Q(x^e), then reverse-lexicographically
/// with z as the last variable (larger exponent first means smaller).
pub fn cmp_order_s(u: &OmegaMonomial, v: &OmegaMonomial, s: i64) -> Ordering {
    let wu = u.x.weight as i64 + if u.z { s } else { 0 };
    let wv = v.x.weight as i64 + if v.z { s } else { 0 };
    wu.cmp(&wv).then_with(|| {
        let eu = u.x.exps.iter().copied().chain([u.z as u32]);
        let ev = v.x.exps.iter().copied().chain([v.z as u32]);
        for (a, b) in eu.zip(ev) {
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    })
}

/// A z + B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairElem {
    pub az: RingElem,
    pub b: RingElem,
}

impl PairElem {
    pub fn gamma(&self) -> usize {
        self.az.gamma() + self.b.gamma()
    }
}

/// Pairing and voting data for one index i at the current s.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VoteRecord {
    pub i_prime: usize,
    pub k: i64,
    pub c: i64,
    pub cbar: i64,
    pub mu: FieldElem,
    pub w: FieldElem,
}

/// Working state of one branch.
#[derive(Clone, Debug)]
pub struct DecoderState {
    /// Current nongap, or -1 once the descent is complete.
    pub s: i64,
    pub f: Vec<PairElem>,
    pub g: Vec<PairElem>,
    /// lc(d_{i,i}) for each g_i.
    pub nu: Vec<FieldElem>,
    /// Accepted w_s for every visited s ∈ Γ.
    pub w_chosen: BTreeMap<u32, FieldElem>,
    /// r minus the evaluations of all accepted w_s φ_s.
    pub r_shift: Vec<FieldElem>,
}

/// Outcome of a termination check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    Continue,
    /// Branch ends with a message (aligned with Γ).
    Found(Vec<FieldElem>),
    /// Branch ends without a result.
    Dead,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListEntry {
    pub message: Vec<FieldElem>,
    pub codeword: Vec<FieldElem>,
    pub distance: usize,
}

#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub entries: Vec<ListEntry>,
    /// Executions of rebasing summed over all branches.
    pub iterations: u128,
    pub cost: CostCounter,
}

#[derive(Clone, Copy, Debug)]
pub struct DecodeOptions {
    pub tau: usize,
    pub criterion: Criterion,
    /// Defaults to the closed-form iteration bound.
    pub iteration_cap: Option<u128>,
    /// Verify membership in I_r and the leading-term shape after every step.
    pub check_invariants: bool,
}

impl DecodeOptions {
    pub fn new(tau: usize, criterion: Criterion) -> DecodeOptions {
        DecodeOptions { tau, criterion, iteration_cap: None, check_invariants: false }
    }
}

/// max{s ∈ Γ | s < n - 2τ - g}.
pub fn criterion_floor(code: &AgCode, tau: usize) -> Option<u32> {
    let limit = code.n() as i64 - 2 * tau as i64 - code.family.ring.semigroup.genus() as i64;
    code.spec.gamma.iter().copied().filter(|&s| (s as i64) < limit).max()
}

/// Upper bound on rebasing executions with N replaced by max Ĥ(Q).
pub fn iteration_bound(code: &AgCode, tau: usize, criterion: Criterion) -> u128 {
    let fam = &code.family;
    let sg = &fam.ring.semigroup;
    let max_gamma = *code.spec.gamma.last().unwrap();
    let top = fam.max_hhat();
    let nongaps_in = |lo: i64, hi: i64| (lo.max(0)..hi).filter(|&s| sg.is_nongap(s)).count() as u128;
    let head = nongaps_in(max_gamma as i64, top as i64);
    let low = code.spec.gamma.iter().filter(|&&s| fam.nu(s) as usize <= 2 * tau).count() as u32;
    let branches = (fam.field().order() as u128).checked_pow(low).unwrap_or(u128::MAX);
    let tail = match (criterion, criterion_floor(code, tau)) {
        (Criterion::First | Criterion::Second, Some(floor)) => nongaps_in(floor as i64, max_gamma as i64),
        _ => nongaps_in(0, max_gamma as i64) + 1,
    };
    head.saturating_add(branches.saturating_mul(tail))
}

/// Decoder for one code, radius and criterion.
pub struct Decoder<'a> {
    code: &'a AgCode,
    opts: DecodeOptions,
    in_gamma: Vec<bool>,
    nu: Vec<u32>,
    /// dag_upto[s] = min{ν(s') | s' ∈ Γ, s' ≤ s}, u32::MAX if none.
    dag_upto: Vec<u32>,
    floor: Option<u32>,
    cap: u128,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a AgCode, opts: DecodeOptions) -> Decoder<'a> {
        let fam = &code.family;
        let top = fam.max_hhat() as usize;
        let mut in_gamma = vec![false; top + 1];
        for &s in &code.spec.gamma {
            in_gamma[s as usize] = true;
        }
        let nu: Vec<u32> = (0..=top as u32)
            .map(|s| if fam.ring.semigroup.is_nongap(s as i64) { fam.nu(s) } else { 0 })
            .collect();
        let mut dag_upto = vec![u32::MAX; top + 1];
        let mut cur = u32::MAX;
        for s in 0..=top {
            if in_gamma[s] {
                cur = cur.min(nu[s]);
            }
            dag_upto[s] = cur;
        }
        let floor = criterion_floor(code, opts.tau);
        let cap = opts.iteration_cap.unwrap_or_else(|| iteration_bound(code, opts.tau, opts.criterion));
        Decoder { code, opts, in_gamma, nu, dag_upto, floor, cap }
    }

    pub fn floor(&self) -> Option<u32> {
        self.floor
    }

    fn tau(&self) -> i64 {
        self.opts.tau as i64
    }

    fn genus(&self) -> i64 {
        self.code.family.ring.semigroup.genus() as i64
    }

    fn unique(&self) -> bool {
        2 * self.tau() < self.code.spec.dag as i64
    }

    fn gamma_contains(&self, s: i64) -> bool {
        s >= 0 && (s as usize) < self.in_gamma.len() && self.in_gamma[s as usize]
    }

    /// f_i = y_i z - y_i h_r, g_i = η_i, starting at s = N = -v_Q(h_r).
    pub fn init(&self, r: &[FieldElem], ctr: &mut CostCounter) -> DecoderState {
        let fam = &self.code.family;
        let ring = &fam.ring;
        let field = ring.field();
        let h = fam.interpolate(r, ctr);
        let mut n_start = ring.pole_order(&h).unwrap_or(fam.max_hhat()) as i64;
        if self.opts.criterion != Criterion::Third {
            if let Some(floor) = self.floor {
                n_start = n_start.max(floor as i64);
            }
        }
        let f = (0..ring.a1())
            .map(|i| {
                let yi = ring.y(i);
                let yh = ring.mul(&yi, &h, ctr);
                PairElem { az: yi, b: yh.neg(field) }
            })
            .collect();
        let g = fam
            .eta
            .eta
            .iter()
            .map(|e| PairElem { az: ring.zero(), b: e.clone() })
            .collect();
        let nu = fam.eta.eta.iter().enumerate().map(|(i, e)| lead_coeff(e, i)).collect();
        DecoderState { s: n_start, f, g, nu, w_chosen: BTreeMap::new(), r_shift: r.to_vec() }
    }

    /// Pairing data for every i and the accepted candidate set W (ascending).
    pub fn pair_and_vote(&self, st: &DecoderState, ctr: &mut CostCounter) -> (Vec<VoteRecord>, Vec<FieldElem>) {
        let ring = &self.code.family.ring;
        let field = ring.field();
        let sg = &ring.semigroup;
        let a1 = ring.a1();
        let s = st.s;
        debug_assert!(s >= 0);
        let sj = (s as u32 % sg.a1) as usize;
        ctr.bound += 2 * a1 as u64;
        let votes: Vec<VoteRecord> = (0..a1)
            .map(|i| {
                let fi = &st.f[i];
                let ip = (i + sj) % a1;
                let deg_a = fi.az.degree(i).expect("f_i has a z-term on y_i") as i64;
                let k = (deg_a * a1 as i64 + sg.apery[i] as i64 + s - sg.apery[ip] as i64) / a1 as i64;
                let deg_d = st.g[ip].b.degree(ip).expect("g_i has a leading term on y_i") as i64;
                let c = deg_d - k;
                let mu = ctr.mul(field, fi.az.coeff(deg_a as u32, i), ring.table.lc(i, sj));
                let b = if k >= 0 { fi.b.coeff(k as u32, ip) } else { FieldElem::ZERO };
                let w = field.neg(ctr.div(field, b, mu));
                VoteRecord { i_prime: ip, k, c, cbar: c.max(0), mu, w }
            })
            .collect();

        let cands = if !self.gamma_contains(s) {
            vec![FieldElem::ZERO]
        } else {
            let total: i64 = votes.iter().map(|v| v.cbar).sum();
            let slack = -2 * self.tau() + self.nu[s as usize] as i64;
            field
                .elements()
                .filter(|&w| {
                    let agree: i64 = votes.iter().filter(|v| v.w == w).map(|v| v.cbar).sum();
                    agree >= total - agree + slack
                })
                .collect()
        };
        (votes, cands)
    }

    /// z ← z + w φ_s applied to A z + B.
    fn substitute(&self, p: &PairElem, w: FieldElem, s: i64, ctr: &mut CostCounter) -> PairElem {
        if w.is_zero() {
            return p.clone();
        }
        let ring = &self.code.family.ring;
        let (k, j) = ring.semigroup.phi(s).unwrap();
        let wphi = RingElem::monomial(ring.a1(), k, j, w);
        let prod = ring.mul(&wphi, &p.az, ctr);
        PairElem { az: p.az.clone(), b: p.b.add(ring.field(), &prod) }
    }

    /// Updates f, g, ν for the chosen w and steps s down to prec(s).
    pub fn rebase(&self, st: &mut DecoderState, votes: &[VoteRecord], w: FieldElem, ctr: &mut CostCounter) {
        let ring = &self.code.family.ring;
        let field = ring.field();
        let s = st.s;
        for (i, v) in votes.iter().enumerate() {
            let ip = v.i_prime;
            let f_sub = self.substitute(&st.f[i], w, s, ctr);
            let g_sub = self.substitute(&st.g[ip], w, s, ctr);
            if v.w == w {
                st.f[i] = f_sub;
                st.g[ip] = g_sub;
                continue;
            }
            let m = ctr.mul(field, v.mu, field.sub(w, v.w));
            let coef = field.neg(ctr.div(field, m, st.nu[ip]));
            ctr.bound += 2 + g_sub.gamma() as u64;
            if v.c > 0 {
                let mut nf = PairElem { az: f_sub.az.shift_x1(v.c as u32), b: f_sub.b.shift_x1(v.c as u32) };
                nf.az.add_scaled(field, &g_sub.az, coef, 0, ctr);
                nf.b.add_scaled(field, &g_sub.b, coef, 0, ctr);
                st.f[i] = nf;
                st.g[ip] = f_sub;
                st.nu[ip] = m;
            } else {
                let shift = (-v.c) as u32;
                let mut nf = f_sub;
                nf.az.add_scaled(field, &g_sub.az, coef, shift, ctr);
                nf.b.add_scaled(field, &g_sub.b, coef, shift, ctr);
                st.f[i] = nf;
                st.g[ip] = g_sub;
            }
        }
        if !w.is_zero() {
            let ev = ring.ev(&ring.phi(s).unwrap());
            for (r, e) in st.r_shift.iter_mut().zip(ev) {
                *r = field.sub(*r, field.mul(w, e));
            }
        }
        if self.gamma_contains(s) {
            st.w_chosen.insert(s as u32, w);
        }
        let next = ring.semigroup.prec(s);
        for gap in (next + 1..s).rev() {
            self.clear_gap(st, gap, ctr);
        }
        st.s = next;
    }

    /// Moves the basis from <_{t+1} to <_t for a gap t. There is no φ_t, so
    /// w = 0 is forced and every nonzero B-coefficient of f_i at pole order
    /// -v_Q(a_ii y_i) + t is eliminated against g_i'. Without this step the
    /// leading-term shape can fail at prec(s) and the true coefficient can
    /// lose the next vote. Not counted as an iteration.
    fn clear_gap(&self, st: &mut DecoderState, t: i64, ctr: &mut CostCounter) {
        let ring = &self.code.family.ring;
        let field = ring.field();
        let sg = &ring.semigroup;
        let a1 = ring.a1();
        for i in 0..a1 {
            let ip = (i + t as usize % a1) % a1;
            let deg_a = st.f[i].az.degree(i).expect("f_i has a z-term on y_i") as i64;
            let k = (deg_a * a1 as i64 + sg.apery[i] as i64 + t - sg.apery[ip] as i64) / a1 as i64;
            if k < 0 {
                continue;
            }
            let b = st.f[i].b.coeff(k as u32, ip);
            if b.is_zero() {
                continue;
            }
            let deg_d = st.g[ip].b.degree(ip).expect("g_i has a leading term on y_i") as i64;
            let c = deg_d - k;
            let coef = field.neg(ctr.div(field, b, st.nu[ip]));
            ctr.bound += 2 + st.g[ip].gamma() as u64;
            let g = st.g[ip].clone();
            if c > 0 {
                let old = st.f[i].clone();
                let f = &mut st.f[i];
                f.az = f.az.shift_x1(c as u32);
                f.b = f.b.shift_x1(c as u32);
                f.az.add_scaled(field, &g.az, coef, 0, ctr);
                f.b.add_scaled(field, &g.b, coef, 0, ctr);
                st.g[ip] = old;
                st.nu[ip] = b;
            } else {
                let f = &mut st.f[i];
                f.az.add_scaled(field, &g.az, coef, (-c) as u32, ctr);
                f.b.add_scaled(field, &g.b, coef, (-c) as u32, ctr);
            }
        }
    }

    /// Index of the f_i whose z-coefficient has the smallest pole order.
    fn f_min<'s>(&self, st: &'s DecoderState) -> &'s PairElem {
        let ring = &self.code.family.ring;
        st.f.iter().min_by_key(|f| ring.pole_order(&f.az).unwrap()).unwrap()
    }

    /// Message from -α_0/α_1 on Γ≤s and the chosen votes on Γ>s, or `None`
    /// if α_1 does not divide α_0 with support in Γ≤s.
    fn quotient_message(&self, st: &DecoderState, fmin: &PairElem, ctr: &mut CostCounter) -> Option<Vec<FieldElem>> {
        let ring = &self.code.family.ring;
        let field = ring.field();
        let sigma = ring.quot(&fmin.b, &fmin.az, ctr).ok()?;
        if ring.support(&sigma).iter().any(|&p| p as i64 > st.s || !self.gamma_contains(p as i64)) {
            return None;
        }
        let msg = self
            .code
            .spec
            .gamma
            .iter()
            .map(|&sp| {
                if sp as i64 <= st.s {
                    let (k, j) = ring.semigroup.phi(sp as i64).unwrap();
                    field.neg(sigma.coeff(k, j))
                } else {
                    st.w_chosen.get(&sp).copied().unwrap_or(FieldElem::ZERO)
                }
            })
            .collect();
        Some(msg)
    }

    fn within_radius(&self, msg: &[FieldElem], r: &[FieldElem], ctr: &mut CostCounter) -> bool {
        let f = self.code.message_function(msg);
        let word = self.code.family.ring.ev_counted(&f, ctr);
        distance(&word, r) <= self.opts.tau
    }

    fn votes_message(&self, st: &DecoderState) -> Vec<FieldElem> {
        self.code
            .spec
            .gamma
            .iter()
            .map(|s| st.w_chosen.get(s).copied().unwrap_or(FieldElem::ZERO))
            .collect()
    }

    /// Applies the configured termination rule at the current s.
    pub fn check_termination(&self, st: &DecoderState, r: &[FieldElem], ctr: &mut CostCounter) -> Termination {
        let ring = &self.code.family.ring;
        let tau = self.tau();
        let g = self.genus();
        let s = st.s;
        let floor = self.floor.map(|f| f as i64);
        let use_third = self.opts.criterion == Criterion::Third || floor.is_none();

        if s < 0 {
            debug_assert!(use_third);
            if self.unique() {
                return Termination::Found(self.votes_message(st));
            }
            let fmin = self.f_min(st);
            let pole = ring.pole_order(&fmin.az).unwrap() as i64;
            let msg = self.votes_message(st);
            if fmin.b.is_zero() && pole <= tau {
                return Termination::Found(msg);
            }
            if pole > tau + g {
                return Termination::Dead;
            }
            return if self.within_radius(&msg, r, ctr) { Termination::Found(msg) } else { Termination::Dead };
        }
        if use_third {
            return Termination::Continue;
        }
        let floor = floor.unwrap();

        match self.opts.criterion {
            Criterion::First => {
                if self.gamma_contains(s) && self.dag_upto[s as usize] as i64 > 2 * tau {
                    let fmin = self.f_min(st);
                    let pole = ring.pole_order(&fmin.az).unwrap() as i64;
                    if pole <= tau + g {
                        // Skipping the weight test when only d_AG(C_Γ) > 2τ holds can
                        // accept a word up to τ + g away from r; α_1 with at most τ
                        // zeros cannot.
                        if let Some(msg) = self.quotient_message(st, fmin, ctr) {
                            if pole <= tau || self.within_radius(&msg, r, ctr) {
                                return Termination::Found(msg);
                            }
                        }
                    }
                }
                if s <= floor {
                    Termination::Dead
                } else {
                    Termination::Continue
                }
            }
            Criterion::Second => {
                if s > floor {
                    return Termination::Continue;
                }
                let fmin = self.f_min(st);
                let pole = ring.pole_order(&fmin.az).unwrap() as i64;
                if pole > tau + g {
                    return Termination::Dead;
                }
                match self.quotient_message(st, fmin, ctr) {
                    Some(msg) if self.unique() || pole <= tau || self.within_radius(&msg, r, ctr) => {
                        Termination::Found(msg)
                    }
                    _ => Termination::Dead,
                }
            }
            Criterion::Third => unreachable!(),
        }
    }

    /// Panics if the state leaves I_{r^(s)}, if a part leads on the wrong
    /// y-component, if ν_i is not lc(d_{i,i}), or if the z-term of f_i or the
    /// B-term of g_i does not dominate under <_s.
    pub fn assert_invariants(&self, st: &DecoderState) {
        let ring = &self.code.family.ring;
        let field = ring.field();
        let s = st.s;
        let member = |p: &PairElem| {
            let a = ring.ev(&p.az);
            let b = ring.ev(&p.b);
            b.iter().zip(&a).zip(&st.r_shift).all(|((&b, &a), &r)| field.add(b, field.mul(r, a)).is_zero())
        };
        let top = |e: &RingElem| ring.pole_order(e).map(|p| p as i64);
        for i in 0..ring.a1() {
            let f = &st.f[i];
            assert!(member(f), "f_{i} left I_r at s={s}");
            let (_, j, _) = ring.leading(&f.az).expect("f_i has a z-term");
            assert_eq!(j, i, "z-part of f_{i} leads on y_{j} at s={s}");

            let gi = &st.g[i];
            assert!(member(gi), "g_{i} left I_r at s={s}");
            let (_, j, c) = ring.leading(&gi.b).expect("g_i has a B-part");
            assert_eq!(j, i, "B-part of g_{i} leads on y_{j} at s={s}");
            assert_eq!(c, st.nu[i], "nu_{i} differs from lc(d_ii) at s={s}");

            let wz = top(&f.az).unwrap() + s;
            assert!(top(&f.b).is_none_or(|p| p <= wz), "B-part of f_{i} outweighs its z-term at s={s}");
            let wb = top(&gi.b).unwrap();
            assert!(top(&gi.az).is_none_or(|p| p + s < wb), "z-part of g_{i} outweighs its B-part at s={s}");
        }
    }

    /// Depth-first search over the branches created by tied votes.
    pub fn list_decode(&self, r: &[FieldElem]) -> Result<DecodeResult> {
        let mut ctr = CostCounter::new();
        let mut iterations: u128 = 0;
        let mut found: Vec<Vec<FieldElem>> = Vec::new();
        let root = self.init(r, &mut ctr);
        let mut stack = vec![root];
        while let Some(mut st) = stack.pop() {
            loop {
                if self.opts.check_invariants {
                    self.assert_invariants(&st);
                }
                match self.check_termination(&st, r, &mut ctr) {
                    Termination::Continue => {}
                    Termination::Found(msg) => {
                        found.push(msg);
                        break;
                    }
                    Termination::Dead => break,
                }
                let (votes, cands) = self.pair_and_vote(&st, &mut ctr);
                let Some((&first, rest)) = cands.split_first() else { break };
                for &w in rest.iter().rev() {
                    let mut branch = st.clone();
                    iterations += 1;
                    self.rebase(&mut branch, &votes, w, &mut ctr);
                    stack.push(branch);
                }
                iterations += 1;
                if iterations > self.cap {
                    return Err(Error::BudgetExceeded(self.cap));
                }
                self.rebase(&mut st, &votes, first, &mut ctr);
            }
        }
        Ok(DecodeResult { entries: self.collect(found, r), iterations, cost: ctr })
    }

    /// Keeps distinct codewords within distance τ, in discovery order.
    fn collect(&self, found: Vec<Vec<FieldElem>>, r: &[FieldElem]) -> Vec<ListEntry> {
        let mut out: Vec<ListEntry> = Vec::new();
        for message in found {
            let codeword = self.code.encode(&message);
            let d = distance(&codeword, r);
            if d <= self.opts.tau && !out.iter().any(|e| e.codeword == codeword) {
                out.push(ListEntry { message, codeword, distance: d });
            }
        }
        out
    }
}

fn lead_coeff(e: &RingElem, j: usize) -> FieldElem {
    let p = e.component(j);
    *p.last().expect("nonzero component")
}

/// Convenience wrapper around [`Decoder::list_decode`].
pub fn list_decode(code: &AgCode, r: &[FieldElem], tau: usize, criterion: Criterion) -> Result<DecodeResult> {
    Decoder::new(code, DecodeOptions::new(tau, criterion)).list_decode(r)
}
