//! Standard-form curves: the weighted reverse-lex order, multivariate
//! reduction modulo the defining ideal, and the Weierstrass semigroup data
//! (Apéry set, the module basis y_i, gaps) derived from the footprint.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

/// Exponent vector in N_0^t together with its weight sum(a_i * m_i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub weight: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>, weights: &[u32]) -> Monomial {
        debug_assert_eq!(exps.len(), weights.len());
        let weight = exps.iter().zip(weights).map(|(e, a)| e * a).sum();
        Monomial { exps, weight }
    }

    pub fn one(t: usize) -> Monomial {
        Monomial { exps: vec![0; t], weight: 0 }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            weight: self.weight + other.weight,
        }
    }

    /// `self / other`; requires `other.divides(self)`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
            weight: self.weight - other.weight,
        }
    }
}

/// The weighted reverse lexicographic order: heavier first; on equal weight
/// the monomial with the smaller exponent at the first differing position is
/// the larger one.
pub fn cmp_weighted_revlex(u: &Monomial, v: &Monomial) -> Ordering {
    u.weight.cmp(&v.weight).then_with(|| {
        for (a, b) in u.exps.iter().zip(&v.exps) {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_weighted_revlex(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in X_1..X_t, terms kept in ascending weighted revlex order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    pub terms: BTreeMap<Monomial, FieldElem>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn monomial(m: Monomial, c: FieldElem) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.last_key_value()
    }

    pub fn add_term(&mut self, field: &Field, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, field: &Field, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(field, m.clone(), c);
        }
        out
    }

    pub fn mul(&self, field: &Field, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                out.add_term(field, m1.mul(m2), field.mul(c1, c2));
            }
        }
        out
    }

    pub fn eval(&self, field: &Field, point: &[FieldElem]) -> FieldElem {
        self.terms.iter().fold(FieldElem::ZERO, |acc, (m, &c)| {
            let v = m
                .exps
                .iter()
                .zip(point)
                .fold(c, |v, (&e, &x)| field.mul(v, field.pow(x, e as u64)));
            field.add(acc, v)
        })
    }

    /// Highest variable index (1-based) that occurs, 0 for constants.
    fn max_variable(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i + 1))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let e: Vec<String> = m.exps.iter().map(|e| e.to_string()).collect();
                format!("{}:{}", c, e.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A curve in standard form as read from a curve file.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub field: Field,
    pub weights: Vec<u32>,
    pub genus: u32,
    /// Reduced Gröbner basis of the defining ideal, each element monic.
    pub gb: Vec<MPoly>,
    /// Values of x_1..x_t at P_1..P_n, in file order.
    pub points: Vec<Vec<FieldElem>>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_uints(line: usize, toks: &[&str]) -> Result<Vec<u32>> {
    toks.iter()
        .map(|t| t.parse::<u32>().map_err(|_| parse_err(line, format!("expected integer, got {t:?}"))))
        .collect()
}

const BUNDLED: &[(&str, &str)] = &[
    ("klein", include_str!("../curves/klein.curve")),
    ("hermitian16", include_str!("../curves/hermitian16.curve")),
    ("gs9", include_str!("../curves/gs9.curve")),
];

impl CurveData {
    /// Names of the curves compiled into the library.
    pub fn bundled_names() -> impl Iterator<Item = &'static str> {
        BUNDLED.iter().map(|(n, _)| *n)
    }

    /// One of the bundled curves, by name with or without `.curve`.
    pub fn bundled(name: &str) -> Option<CurveData> {
        let stem = name.strip_suffix(".curve").unwrap_or(name);
        BUNDLED
            .iter()
            .find(|(n, _)| *n == stem)
            .map(|(_, text)| CurveData::parse(text).expect("bundled curve files are valid"))
    }

    /// Reads a curve file; falls back to the bundled curve of the same name
    /// when no such file exists.
    pub fn load(path: &Path) -> Result<CurveData> {
        match std::fs::read_to_string(path) {
            Ok(text) => CurveData::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => path
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(CurveData::bundled)
                .ok_or(Error::Io(e)),
            Err(e) => Err(Error::Io(e)),
        }
    }

    pub fn parse(text: &str) -> Result<CurveData> {
        Self::parse_inner(text, true)
    }

    /// Parses a curve file whose `points` section may be absent.
    pub fn parse_without_points(text: &str) -> Result<CurveData> {
        Self::parse_inner(text, false)
    }

    fn parse_inner(text: &str, need_points: bool) -> Result<CurveData> {
        let mut field = None;
        let mut weights: Option<Vec<u32>> = None;
        let mut genus = None;
        let mut gb_lines: Vec<(usize, String)> = Vec::new();
        let mut point_lines: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut saw_points = false;

        #[derive(PartialEq)]
        enum Section {
            Top,
            Gb,
            Points,
        }
        let mut section = Section::Top;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            match section {
                Section::Gb => {
                    if line == "end" {
                        section = Section::Top;
                    } else {
                        gb_lines.push((lineno, line.to_string()));
                    }
                    continue;
                }
                Section::Points => {
                    if line == "end" {
                        section = Section::Top;
                    } else {
                        let toks: Vec<&str> = line.split_whitespace().collect();
                        point_lines.push((lineno, parse_uints(lineno, &toks)?));
                    }
                    continue;
                }
                Section::Top => {}
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "field" => {
                    let nums = parse_uints(lineno, &toks[1..])?;
                    if nums.len() < 3 {
                        return Err(parse_err(lineno, "field needs p, m and coefficients"));
                    }
                    field = Some(Field::new(nums[0], nums[1], &nums[2..])?);
                }
                "weights" => weights = Some(parse_uints(lineno, &toks[1..])?),
                "genus" => {
                    let g = parse_uints(lineno, &toks[1..])?;
                    if g.len() != 1 {
                        return Err(parse_err(lineno, "genus takes one value"));
                    }
                    genus = Some(g[0]);
                }
                "gb" => section = Section::Gb,
                "points" => {
                    section = Section::Points;
                    saw_points = true;
                }
                other => return Err(parse_err(lineno, format!("unknown keyword {other:?}"))),
            }
        }
        if section != Section::Top {
            return Err(parse_err(text.lines().count(), "missing `end`"));
        }

        let field = field.ok_or_else(|| parse_err(0, "missing `field` line"))?;
        let weights = weights.ok_or_else(|| parse_err(0, "missing `weights` line"))?;
        let genus = genus.ok_or_else(|| parse_err(0, "missing `genus` line"))?;
        if need_points && !saw_points {
            return Err(parse_err(0, "missing `points` section"));
        }
        let t = weights.len();
        if t == 0 || weights.iter().any(|&a| a == 0) {
            return Err(Error::InvalidCurve("weights must be positive".into()));
        }
        if weights.iter().fold(0, |g, &a| gcd(g, a)) != 1 {
            return Err(Error::InvalidCurve("weights must have gcd 1".into()));
        }

        let mut gb = Vec::with_capacity(gb_lines.len());
        for (lineno, line) in &gb_lines {
            let mut poly = MPoly::zero();
            for term in line.split('+') {
                let term = term.trim();
                let (c, e) = term
                    .split_once(':')
                    .ok_or_else(|| parse_err(*lineno, format!("term {term:?} lacks `coeff:exps`")))?;
                let c = c
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| parse_err(*lineno, format!("bad coefficient {c:?}")))?;
                let c = field.elem(c)?;
                let exps: Vec<&str> = e.split(',').map(str::trim).collect();
                let exps = parse_uints(*lineno, &exps)?;
                if exps.len() != t {
                    return Err(parse_err(*lineno, format!("expected {t} exponents")));
                }
                poly.add_term(&field, Monomial::new(exps, &weights), c);
            }
            if poly.is_zero() {
                return Err(parse_err(*lineno, "zero polynomial in Gröbner basis"));
            }
            gb.push(poly);
        }

        let mut points = Vec::with_capacity(point_lines.len());
        for (lineno, vals) in &point_lines {
            if vals.len() != t {
                return Err(parse_err(*lineno, format!("expected {t} coordinates")));
            }
            let pt = vals.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>>>()?;
            points.push(pt);
        }

        let curve = CurveData { field, weights, genus, gb, points };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<()> {
        for (i, g) in self.gb.iter().enumerate() {
            let (lm, lc) = g.leading().expect("nonzero");
            if !lc.is_one() {
                return Err(Error::InvalidCurve(format!("basis element {} is not monic", i + 1)));
            }
            for (j, h) in self.gb.iter().enumerate() {
                if i != j && h.terms.keys().any(|m| lm.divides(m)) {
                    return Err(Error::InvalidCurve(format!(
                        "basis is not reduced: leading monomial of element {} divides a term of element {}",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if g.terms.keys().rev().skip(1).any(|m| lm.divides(m)) {
                return Err(Error::InvalidCurve(format!("basis element {} is not reduced", i + 1)));
            }
        }
        for (k, pt) in self.points.iter().enumerate() {
            for (i, g) in self.gb.iter().enumerate() {
                if !g.eval(&self.field, pt).is_zero() {
                    return Err(Error::InvalidCurve(format!(
                        "point {} does not satisfy basis element {}",
                        k + 1,
                        i + 1
                    )));
                }
            }
        }
        let mut sorted = self.points.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCurve("points are not pairwise distinct".into()));
        }
        Ok(())
    }

    pub fn t(&self) -> usize {
        self.weights.len()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gb.iter().map(|g| g.leading().unwrap().0.clone()).collect()
    }

    pub fn monomial(&self, exps: Vec<u32>) -> Monomial {
        Monomial::new(exps, &self.weights)
    }

    /// Remainder of multivariate division by the Gröbner basis; the result
    /// is supported on the footprint.
    pub fn reduce(&self, poly: &MPoly) -> MPoly {
        let field = &self.field;
        let mut work = poly.terms.clone();
        let mut rem = BTreeMap::new();
        while let Some((m, c)) = work.pop_last() {
            let divisor = self.gb.iter().find(|g| g.leading().unwrap().0.divides(&m));
            match divisor {
                Some(g) => {
                    let (lm, _) = g.leading().unwrap();
                    let shift = m.div(lm);
                    for (gm, &gc) in g.terms.iter().rev().skip(1) {
                        let key = gm.mul(&shift);
                        let delta = field.neg(field.mul(c, gc));
                        let entry = work.entry(key).or_insert(FieldElem::ZERO);
                        *entry = field.add(*entry, delta);
                        if entry.is_zero() {
                            let key = gm.mul(&shift);
                            work.remove(&key);
                        }
                    }
                }
                None => {
                    rem.insert(m, c);
                }
            }
        }
        MPoly { terms: rem }
    }

    /// Every common zero of the basis in GF(q)^t, in lexicographic order of
    /// the encoded coordinates.
    pub fn enumerate_affine_points(&self) -> Vec<Vec<FieldElem>> {
        let t = self.t();
        let by_depth: Vec<Vec<&MPoly>> = (0..=t)
            .map(|d| self.gb.iter().filter(|g| g.max_variable() == d).collect())
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![FieldElem::ZERO; t];
        self.enumerate_rec(0, &by_depth, &mut cur, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        depth: usize,
        by_depth: &[Vec<&MPoly>],
        cur: &mut Vec<FieldElem>,
        out: &mut Vec<Vec<FieldElem>>,
    ) {
        if by_depth[depth].iter().any(|g| !g.eval(&self.field, cur).is_zero()) {
            return;
        }
        if depth == self.t() {
            out.push(cur.clone());
            return;
        }
        for v in self.field.elements() {
            cur[depth] = v;
            self.enumerate_rec(depth + 1, by_depth, cur, out);
        }
        cur[depth] = FieldElem::ZERO;
    }
}

/// Weierstrass semigroup data derived from the footprint of the ideal.
#[derive(Clone, Debug)]
pub struct Semigroup {
    pub a1: u32,
    /// b_i = least nongap congruent to i mod a_1.
    pub apery: Vec<u32>,
    /// L_i, the footprint exponent vector of weight b_i (first entry 0).
    pub apery_monomials: Vec<Vec<u32>>,
    pub gaps: Vec<u32>,
    pub generators: Vec<u32>,
}

fn footprint_rec(
    weights: &[u32],
    leads: &[Monomial],
    bound: u32,
    idx: usize,
    cur: &mut Vec<u32>,
    weight: u32,
    out: &mut Vec<Monomial>,
) {
    if idx == weights.len() {
        let m = Monomial { exps: cur.clone(), weight };
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        return;
    }
    let mut w = weight;
    let mut e = 0;
    while w <= bound {
        cur[idx] = e;
        footprint_rec(weights, leads, bound, idx + 1, cur, w, out);
        e += 1;
        w += weights[idx];
    }
    cur[idx] = 0;
}

impl Semigroup {
    /// Derives b_i, L_i and the gaps from the footprint and checks the
    /// gap count against the declared genus.
    pub fn compute(curve: &CurveData) -> Result<Semigroup> {
        let a = &curve.weights;
        let a1 = a[0];
        let amax = *a.iter().max().unwrap();
        let bound = 2 * curve.genus + 2 * a1 + amax;
        let leads = curve.leading_monomials();
        let mut footprint = Vec::new();
        let mut cur = vec![0; a.len()];
        footprint_rec(a, &leads, bound, 0, &mut cur, 0, &mut footprint);

        let mut by_weight: Vec<Option<Monomial>> = vec![None; bound as usize + 1];
        for m in footprint {
            let w = m.weight as usize;
            if by_weight[w].is_some() {
                return Err(Error::InvalidCurve(format!(
                    "two footprint monomials share pole order {w}; not a standard form"
                )));
            }
            by_weight[w] = Some(m);
        }
        if ((bound + 1 - a1)..=bound).any(|w| by_weight[w as usize].is_none()) {
            let computed = by_weight.iter().filter(|m| m.is_none()).count() as u32;
            return Err(Error::GenusMismatch { declared: curve.genus, computed });
        }

        let mut apery = vec![u32::MAX; a1 as usize];
        let mut apery_monomials = vec![Vec::new(); a1 as usize];
        for (w, m) in by_weight.iter().enumerate() {
            let i = w % a1 as usize;
            if let Some(m) = m {
                if apery[i] == u32::MAX {
                    if m.exps[0] != 0 {
                        return Err(Error::InvalidCurve(format!(
                            "footprint monomial of weight {w} has positive x_1 exponent"
                        )));
                    }
                    apery[i] = w as u32;
                    apery_monomials[i] = m.exps.clone();
                }
            }
        }
        // Every footprint monomial must be x_1^k times the L_i of its class.
        for (w, m) in by_weight.iter().enumerate() {
            if let Some(m) = m {
                let i = w % a1 as usize;
                let l = &apery_monomials[i];
                if m.exps[1..] != l[1..] || m.exps[0] * a1 + apery[i] != w as u32 {
                    return Err(Error::InvalidCurve(format!(
                        "footprint monomial {:?} is not x_1^k * L_{}",
                        m.exps, i
                    )));
                }
            }
        }

        let gaps: Vec<u32> = (0..=bound).filter(|&w| by_weight[w as usize].is_none()).collect();
        if gaps.len() as u32 != curve.genus {
            return Err(Error::GenusMismatch { declared: curve.genus, computed: gaps.len() as u32 });
        }

        let mut sg = Semigroup { a1, apery, apery_monomials, gaps, generators: Vec::new() };
        sg.generators = sg.minimal_generators();
        Ok(sg)
    }

    pub fn genus(&self) -> u32 {
        self.gaps.len() as u32
    }

    pub fn is_nongap(&self, s: i64) -> bool {
        s >= 0 && s as u32 >= self.apery[(s as u32 % self.a1) as usize]
    }

    /// Largest nongap below `s`, or -1 below 0.
    pub fn prec(&self, s: i64) -> i64 {
        let mut c = s - 1;
        while c >= 0 && !self.is_nongap(c) {
            c -= 1;
        }
        c.max(-1)
    }

    /// Index (k, j) of phi_s = x_1^k y_j, the unique basis monomial of pole order s.
    pub fn phi(&self, s: i64) -> Result<(u32, usize)> {
        if !self.is_nongap(s) {
            return Err(Error::NotANongap(s));
        }
        let s = s as u32;
        let j = (s % self.a1) as usize;
        Ok(((s - self.apery[j]) / self.a1, j))
    }

    /// Pole order of x_1^k y_j.
    #[inline]
    pub fn pole_order(&self, k: u32, j: usize) -> u32 {
        k * self.a1 + self.apery[j]
    }

    pub fn nongaps_up_to(&self, bound: u32) -> impl Iterator<Item = u32> + '_ {
        (0..=bound).filter(move |&s| self.is_nongap(s as i64))
    }

    fn minimal_generators(&self) -> Vec<u32> {
        let frob = self.gaps.last().copied().unwrap_or(0);
        let top = frob + 2 * self.a1 + 1;
        let ng: Vec<u32> = self.nongaps_up_to(top).filter(|&s| s > 0).collect();
        ng.iter()
            .copied()
            .filter(|&s| !ng.iter().any(|&u| u < s && self.is_nongap((s - u) as i64) && s - u > 0))
            .collect()
    }

    /// nu(s) from the pole orders of eta_0..eta_{a_1-1}:
    /// (1/a_1) * sum_i max(-v(eta_{i'}) - b_i - s, 0), i' = i + s mod a_1.
    pub fn nu(&self, s: u32, eta_pole: &[u32]) -> u32 {
        let a1 = self.a1 as i64;
        let total: i64 = (0..self.a1 as usize)
            .map(|i| {
                let ip = ((i as i64 + s as i64) % a1) as usize;
                (eta_pole[ip] as i64 - self.apery[i] as i64 - s as i64).max(0)
            })
            .sum();
        debug_assert_eq!(total % a1, 0);
        (total / a1) as u32
    }

    /// lambda(s) = #{ j nongap | j + s in hhat }.
    pub fn lambda(&self, s: u32, hhat: &[u32]) -> u32 {
        let max = match hhat.last() {
            Some(&m) if m >= s => m,
            _ => return 0,
        };
        self.nongaps_up_to(max - s)
            .filter(|j| hhat.binary_search(&(j + s)).is_ok())
            .count() as u32
    }
}
