//! Monte-Carlo decoding trials: random codewords, fixed-weight errors, and
//! per-configuration statistics.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{AgCode, CodeFamily};
use crate::decoder::{Criterion, DecodeOptions, Decoder};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

pub use crate::decoder::iteration_bound;

/// Codewords examined by the low-weight search behind [`ErrorMode::TowardNearest`].
pub const NEAREST_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorMode {
    /// Uniform support of size τ, uniform nonzero values.
    Random,
    /// τ positions of a low-weight codeword c', so r moves towards c + c'.
    TowardNearest,
}

impl FromStr for ErrorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<ErrorMode> {
        match s {
            "R" | "r" | "random" => Ok(ErrorMode::Random),
            "N" | "n" | "nearest" => Ok(ErrorMode::TowardNearest),
            other => Err(Error::InvalidConfig(format!("error mode must be R or N, got {other}"))),
        }
    }
}

impl fmt::Display for ErrorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorMode::Random => "R",
            ErrorMode::TowardNearest => "N",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaChoice {
    /// Feng–Rao improved Γ for a designed distance.
    Delta(u32),
    Explicit(Vec<u32>),
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    /// Bundled curve name or path to a curve file.
    pub curve: String,
    pub gamma: GammaChoice,
    pub tau: usize,
    pub criterion: Criterion,
    pub trials: usize,
    pub error_mode: ErrorMode,
    pub seed: u64,
}

impl TrialConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("at least one trial is required".into()));
        }
        if self.tau > n {
            return Err(Error::InvalidConfig(format!("tau {} exceeds code length {n}", self.tau)));
        }
        Ok(())
    }
}

/// Aggregated results of one (code, τ, mode, criterion) configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialStats {
    pub curve: String,
    pub gamma_size: usize,
    pub dag: u32,
    pub tau: usize,
    pub mode: ErrorMode,
    pub criterion: Criterion,
    pub bound: u128,
    pub trials: usize,
    pub avg_iterations: f64,
    pub max_iterations: u128,
    /// Executed field multiplications and divisions.
    pub avg_ops: f64,
    pub max_ops: u64,
    /// Sum of the per-step closed-form operation bounds.
    pub avg_ops_bound: f64,
    pub max_ops_bound: u64,
    pub avg_found: f64,
    pub max_found: usize,
    pub successes: usize,
}

impl TrialStats {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn all_succeeded(&self) -> bool {
        self.successes == self.trials
    }

    /// `curve gammasize dag tau mode criterion bound avg_iter max_iter
    /// avg_ops max_ops avg_found max_found success_rate`
    pub fn line(&self) -> String {
        format!(
            "{} {} {} {} {} {} {} {:.2} {} {:.2} {} {:.2} {} {:.4}",
            self.curve,
            self.gamma_size,
            self.dag,
            self.tau,
            self.mode,
            self.criterion,
            self.bound,
            self.avg_iterations,
            self.max_iterations,
            self.avg_ops,
            self.max_ops,
            self.avg_found,
            self.max_found,
            self.success_rate()
        )
    }

    pub fn table_header() -> String {
        format!(
            "{:<12} {:>4} {:>4} {:>5} {:>4} {:>12} {:>10} {:>8} {:>12} {:>10} {:>12} {:>6} {:>4} {:>7}",
            "curve", "#Γ", "dAG", "τ", "crit", "bound", "avg iter", "max", "avg ops", "max", "avg bound", "found", "max", "success"
        )
    }

    pub fn table_row(&self) -> String {
        format!(
            "{:<12} {:>4} {:>4} {:>4}{} {:>4} {:>12} {:>10.2} {:>8} {:>12.2} {:>10} {:>12.2} {:>6.2} {:>4} {:>6.1}%",
            self.curve,
            self.gamma_size,
            self.dag,
            self.tau,
            self.mode,
            self.criterion,
            self.bound,
            self.avg_iterations,
            self.max_iterations,
            self.avg_ops,
            self.max_ops,
            self.avg_ops_bound,
            self.avg_found,
            self.max_found,
            100.0 * self.success_rate()
        )
    }
}

/// Codewords of the least weight ≥ τ seen by a randomized information-set
/// search over `samples` candidates.
pub fn low_weight_codewords(code: &AgCode, tau: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<FieldElem>>> {
    let field = code.field();
    let n = code.n();
    let mut best = usize::MAX;
    let mut pool: Vec<Vec<FieldElem>> = Vec::new();
    let mut seen = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    while seen < samples {
        perm.shuffle(rng);
        for row in systematic_rows(field, &code.spec.generators, &perm) {
            seen += 1;
            let w = row.iter().filter(|c| !c.is_zero()).count();
            if w >= tau.max(1) && w <= best {
                if w < best {
                    best = w;
                    pool.clear();
                }
                if !pool.contains(&row) {
                    pool.push(row);
                }
            }
            if seen >= samples {
                break;
            }
        }
    }
    if pool.is_empty() {
        return Err(Error::NearestUnavailable { tau, samples });
    }
    Ok(pool)
}

/// Rows of the reduced echelon form of `gens` after permuting columns by `perm`,
/// returned in the original coordinates.
fn systematic_rows(field: &Field, gens: &[Vec<FieldElem>], perm: &[usize]) -> Vec<Vec<FieldElem>> {
    let mut m: Vec<Vec<FieldElem>> = gens.iter().map(|r| perm.iter().map(|&p| r[p]).collect()).collect();
    let k = m.len();
    let n = perm.len();
    let mut row = 0;
    for col in 0..n {
        if row == k {
            break;
        }
        let Some(p) = (row..k).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = field.inv(m[row][col]).unwrap();
        m[row].iter_mut().for_each(|x| *x = field.mul(*x, inv));
        let pivot = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            let c = r[col];
            if i != row && !c.is_zero() {
                for (x, &y) in r.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        row += 1;
    }
    m.into_iter()
        .map(|r| {
            let mut out = vec![FieldElem::ZERO; n];
            for (j, &p) in perm.iter().enumerate() {
                out[p] = r[j];
            }
            out
        })
        .collect()
}

fn random_nonzero(field: &Field, rng: &mut ChaCha8Rng) -> FieldElem {
    FieldElem::from_raw(rng.gen_range(1..field.order()) as u8)
}

/// Error vector of weight τ.
pub fn gen_error(
    field: &Field,
    n: usize,
    tau: usize,
    mode: ErrorMode,
    pool: &[Vec<FieldElem>],
    rng: &mut ChaCha8Rng,
) -> Vec<FieldElem> {
    let mut e = vec![FieldElem::ZERO; n];
    match mode {
        ErrorMode::Random => {
            for p in sample(rng, n, tau).iter() {
                e[p] = random_nonzero(field, rng);
            }
        }
        ErrorMode::TowardNearest => {
            let base = pool.choose(rng).expect("nonempty pool");
            let scale = random_nonzero(field, rng);
            let support: Vec<usize> = (0..n).filter(|&j| !base[j].is_zero()).collect();
            for &p in support.choose_multiple(rng, tau) {
                e[p] = field.mul(scale, base[p]);
            }
        }
    }
    e
}

/// Seeded generator for trial `index`, independent of execution order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One transmitted codeword and the words each criterion returned for it.
#[derive(Clone, Debug)]
pub struct TrialRecord {
    pub message: Vec<FieldElem>,
    pub received: Vec<FieldElem>,
    /// Sorted codewords per criterion, in the order the criteria were given.
    pub lists: Vec<Vec<Vec<FieldElem>>>,
}

/// Runs the same trials under several criteria.
pub struct Simulation {
    pub code: AgCode,
    pub curve: String,
    pub tau: usize,
    pub mode: ErrorMode,
    pub stats: Vec<TrialStats>,
    pub records: Vec<TrialRecord>,
}

impl Simulation {
    /// True if every criterion returned the same codeword set in every trial.
    pub fn criteria_agree(&self) -> bool {
        self.records.iter().all(|t| t.lists.windows(2).all(|w| w[0] == w[1]))
    }
}

pub fn load_family(curve: &str) -> Result<CodeFamily> {
    let path = std::path::Path::new(curve);
    let data = if path.exists() || curve.contains('/') || curve.ends_with(".curve") {
        crate::curve::CurveData::load(path)?
    } else {
        crate::curve::CurveData::bundled(curve)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown curve {curve}")))?
    };
    CodeFamily::new(data)
}

pub fn build_code(family: Arc<CodeFamily>, gamma: &GammaChoice) -> Result<AgCode> {
    let spec = match gamma {
        GammaChoice::Delta(d) => family.improved_gamma(*d)?,
        GammaChoice::Explicit(list) => family.explicit_gamma(list)?,
    };
    Ok(AgCode::new(family, spec))
}

/// Trials for one configuration under each of `criteria`; all criteria see
/// the same transmitted words and errors.
pub fn simulate(
    code: &AgCode,
    curve: &str,
    tau: usize,
    mode: ErrorMode,
    criteria: &[Criterion],
    trials: usize,
    seed: u64,
) -> Result<Simulation> {
    if trials == 0 {
        return Err(Error::InvalidConfig("at least one trial is required".into()));
    }
    if tau > code.n() {
        return Err(Error::InvalidConfig(format!("tau {tau} exceeds code length {}", code.n())));
    }
    let field = code.field();
    let q = field.order();
    let pool = match mode {
        ErrorMode::Random => Vec::new(),
        ErrorMode::TowardNearest => low_weight_codewords(code, tau, NEAREST_SAMPLES, &mut trial_rng(seed, u64::MAX))?,
    };
    let decoders: Vec<Decoder> = criteria.iter().map(|&c| Decoder::new(code, DecodeOptions::new(tau, c))).collect();

    let mut acc: Vec<Acc> = criteria.iter().map(|_| Acc::default()).collect();
    let mut records = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let message: Vec<FieldElem> =
            (0..code.spec.dim).map(|_| FieldElem::from_raw(rng.gen_range(0..q) as u8)).collect();
        let sent = code.encode(&message);
        let err = gen_error(field, code.n(), tau, mode, &pool, &mut rng);
        let received: Vec<FieldElem> = sent.iter().zip(&err).map(|(&c, &e)| field.add(c, e)).collect();
        let mut lists = Vec::with_capacity(criteria.len());
        for (dec, a) in decoders.iter().zip(acc.iter_mut()) {
            let res = dec.list_decode(&received)?;
            let ok = res.entries.iter().any(|e| e.message == message);
            a.push(res.iterations, res.cost.total(), res.cost.bound, res.entries.len(), ok);
            let mut words: Vec<Vec<FieldElem>> = res.entries.into_iter().map(|e| e.codeword).collect();
            words.sort();
            lists.push(words);
        }
        records.push(TrialRecord { message, received, lists });
    }

    let stats = criteria
        .iter()
        .zip(acc)
        .map(|(&criterion, a)| TrialStats {
            curve: curve.to_string(),
            gamma_size: code.spec.dim,
            dag: code.spec.dag,
            tau,
            mode,
            criterion,
            bound: iteration_bound(code, tau, criterion),
            trials,
            avg_iterations: a.iterations as f64 / trials as f64,
            max_iterations: a.max_iterations,
            avg_ops: a.ops as f64 / trials as f64,
            max_ops: a.max_ops,
            avg_ops_bound: a.ops_bound as f64 / trials as f64,
            max_ops_bound: a.max_ops_bound,
            avg_found: a.found as f64 / trials as f64,
            max_found: a.max_found,
            successes: a.successes,
        })
        .collect();
    Ok(Simulation { code: code.clone(), curve: curve.to_string(), tau, mode, stats, records })
}

/// Runs one configuration as described by `cfg`.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialStats> {
    let family = Arc::new(load_family(&cfg.curve)?);
    cfg.validate(family.n())?;
    let code = build_code(family, &cfg.gamma)?;
    let sim = simulate(&code, &cfg.curve, cfg.tau, cfg.error_mode, &[cfg.criterion], cfg.trials, cfg.seed)?;
    Ok(sim.stats.into_iter().next().unwrap())
}

#[derive(Default)]
struct Acc {
    iterations: u128,
    max_iterations: u128,
    ops: u64,
    max_ops: u64,
    ops_bound: u64,
    max_ops_bound: u64,
    found: usize,
    max_found: usize,
    successes: usize,
}

impl Acc {
    fn push(&mut self, iterations: u128, ops: u64, ops_bound: u64, found: usize, ok: bool) {
        self.iterations += iterations;
        self.max_iterations = self.max_iterations.max(iterations);
        self.ops += ops;
        self.max_ops = self.max_ops.max(ops);
        self.ops_bound += ops_bound;
        self.max_ops_bound = self.max_ops_bound.max(ops_bound);
        self.found += found;
        self.max_found = self.max_found.max(found);
        self.successes += usize::from(ok);
    }
}
