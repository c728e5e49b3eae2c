//! Verification campaigns: run the oracle and the two predictors over a
//! family of curves, compare, and persist the verdicts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldError};
use crate::hasse::{classify, CaseId, TheoremCase};
use crate::rational::{format_ratio, Exact, Vertex};
use crate::vss::{predict_with, EntryRule, StructureCache};
use crate::zeta::{exponential_sums_all, parse_terms, CurvePoly, LPolynomial, ZetaError, MAX_SUM_DEGREE};

/// Exhaustive sweeps may visit at most this many curves per genus.
pub const MAX_EXHAUSTIVE: u64 = 1 << 20;
/// Batched oracle tables are used up to this many coefficient bits.
const BATCH_BITS: u32 = 20;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("exhaustive sweep over {count} curves at genus {genus} exceeds the limit of 2^20")]
    TooLarge { genus: u32, count: u64 },
    #[error("bad genus range {0:?}")]
    BadGenus(String),
    #[error("unknown predictor {0:?}, expected oracle, vss or hasse")]
    BadPredictor(String),
    #[error("no predictor selected")]
    NoPredictor,
    #[error("fixed exponent {exponent} is not an odd exponent <= {max}")]
    BadFix { exponent: u32, max: u32 },
    #[error("fixed leading coefficient c_{0} is zero")]
    ZeroLeading(u32),
    #[error("oracle needs sums over degree {0} extensions, above the limit of 30")]
    OracleTooLarge(u32),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predictor {
    Oracle,
    Vss,
    Hasse,
}

impl FromStr for Predictor {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "oracle" => Ok(Predictor::Oracle),
            "vss" => Ok(Predictor::Vss),
            "hasse" => Ok(Predictor::Hasse),
            other => Err(SweepError::BadPredictor(other.to_string())),
        }
    }
}

pub fn parse_predictors(s: &str) -> Result<BTreeSet<Predictor>, SweepError> {
    let set: BTreeSet<Predictor> =
        s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
    if set.is_empty() {
        return Err(SweepError::NoPredictor);
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Exhaustive,
    Random { seed: u64, count: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub q_degree: u32,
    pub genus_min: u32,
    pub genus_max: u32,
    pub domain: Domain,
    /// Coefficients held fixed, by exponent, as field-element bits.
    pub fixed: BTreeMap<u32, u64>,
    pub predictors: BTreeSet<Predictor>,
}

impl SweepSpec {
    pub fn exhaustive(q_degree: u32, genus: u32) -> Self {
        SweepSpec {
            q_degree,
            genus_min: genus,
            genus_max: genus,
            domain: Domain::Exhaustive,
            fixed: BTreeMap::new(),
            predictors: [Predictor::Oracle, Predictor::Vss, Predictor::Hasse].into(),
        }
    }

    pub fn with_fixed(mut self, exponent: u32, bits: u64) -> Self {
        self.fixed.insert(exponent, bits);
        self
    }

    pub fn with_predictors(mut self, predictors: impl IntoIterator<Item = Predictor>) -> Self {
        self.predictors = predictors.into_iter().collect();
        self
    }

    /// Fixed coefficients from `e:bits[,e:bits...]`.
    pub fn parse_fixed(text: &str) -> Result<BTreeMap<u32, u64>, SweepError> {
        Ok(parse_terms(text)?.into_iter().collect())
    }

    /// `N` or `LO-HI`.
    pub fn parse_genus(text: &str) -> Result<(u32, u32), SweepError> {
        let bad = || SweepError::BadGenus(text.to_string());
        let (lo, hi) = match text.split_once('-') {
            Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
            None => {
                let g = text.trim().parse().map_err(|_| bad())?;
                (g, g)
            }
        };
        if lo == 0 || lo > hi {
            return Err(bad());
        }
        Ok((lo, hi))
    }

    fn check(&self, ctx: &FieldCtx) -> Result<(), SweepError> {
        if self.predictors.is_empty() {
            return Err(SweepError::NoPredictor);
        }
        if self.genus_min == 0 || self.genus_min > self.genus_max {
            return Err(SweepError::BadGenus(format!("{}-{}", self.genus_min, self.genus_max)));
        }
        for g in self.genus_min..=self.genus_max {
            let max = 2 * g + 1;
            for (&e, &bits) in &self.fixed {
                if e % 2 == 0 || e > max {
                    return Err(SweepError::BadFix { exponent: e, max });
                }
                ctx.element(bits)?;
                if e == max && bits == 0 {
                    return Err(SweepError::ZeroLeading(e));
                }
            }
            if self.predictors.contains(&Predictor::Oracle) && self.q_degree * g > MAX_SUM_DEGREE {
                return Err(SweepError::OracleTooLarge(self.q_degree * g));
            }
            if self.domain == Domain::Exhaustive {
                let count = self.exhaustive_count(g);
                if count > MAX_EXHAUSTIVE {
                    return Err(SweepError::TooLarge { genus: g, count });
                }
            }
        }
        Ok(())
    }

    fn free_exponents(&self, genus: u32) -> Vec<u32> {
        (0..=genus).map(|i| 2 * i + 1).filter(|e| !self.fixed.contains_key(e)).collect()
    }

    fn exhaustive_count(&self, genus: u32) -> u64 {
        let q = 1u128 << self.q_degree;
        let free = self.free_exponents(genus);
        let leading_free = free.last() == Some(&(2 * genus + 1));
        let rest = free.len() as u32 - u32::from(leading_free);
        let count = q.saturating_pow(rest) * if leading_free { q - 1 } else { 1 };
        u64::try_from(count).unwrap_or(u64::MAX)
    }

    fn build(&self, ctx: FieldCtx, genus: u32, free: &[u32], values: &[u64]) -> Result<CurvePoly, ZetaError> {
        let fixed = self.fixed.iter().map(|(&e, &b)| (e, b));
        CurvePoly::with_genus(ctx, genus, fixed.chain(free.iter().copied().zip(values.iter().copied())))
    }

    /// Curves of the sweep, sorted by genus then by coefficient code. A
    /// random domain draws `count` curves in all, each genus uniformly from
    /// the range.
    pub fn curves(&self) -> Result<Vec<CurvePoly>, SweepError> {
        let ctx = FieldCtx::new(self.q_degree)?;
        self.check(&ctx)?;
        let q = 1u64 << self.q_degree;
        let mut out = Vec::new();
        match &self.domain {
            Domain::Exhaustive => {
                for g in self.genus_min..=self.genus_max {
                    let free = self.free_exponents(g);
                    let leading_free = free.last() == Some(&(2 * g + 1));
                    for k in 0..self.exhaustive_count(g) {
                        let mut rest = k;
                        let values: Vec<u64> = free
                            .iter()
                            .map(|&e| {
                                if leading_free && e == 2 * g + 1 {
                                    rest % (q - 1) + 1
                                } else {
                                    let v = rest % q;
                                    rest /= q;
                                    v
                                }
                            })
                            .collect();
                        out.push(self.build(ctx, g, &free, &values)?);
                    }
                }
            }
            Domain::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for _ in 0..*count {
                    let g = rng.random_range(self.genus_min..=self.genus_max);
                    let free = self.free_exponents(g);
                    let values: Vec<u64> = free
                        .iter()
                        .map(|&e| if e == 2 * g + 1 { rng.random_range(1..q) } else { rng.random_range(0..q) })
                        .collect();
                    out.push(self.build(ctx, g, &free, &values)?);
                }
            }
        }
        out.sort_by_key(|f| (f.genus(), f.code()));
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VssVerdict {
    pub vertex: Option<Vertex>,
    pub dim: Option<usize>,
    pub density: Option<Exact>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub q_degree: u32,
    pub genus: u32,
    pub coeffs: String,
    pub oracle: Option<Vertex>,
    pub vss: Option<VssVerdict>,
    pub hasse: Option<TheoremCase>,
    /// Set when both the oracle and vss produced a vertex.
    pub vss_agrees: Option<bool>,
    /// Set when the oracle ran and the curve sits on the ladder. The case
    /// is an equivalence, so a silent case must not match its vertex either.
    pub hasse_agrees: Option<bool>,
}

impl VerdictRecord {
    pub fn curve(&self) -> Result<CurvePoly, SweepError> {
        let ctx = FieldCtx::new(self.q_degree)?;
        Ok(CurvePoly::with_genus(ctx, self.genus, parse_terms(&self.coeffs)?)?)
    }

    pub fn disagrees(&self) -> bool {
        self.vss_agrees == Some(false) || self.hasse_agrees == Some(false)
    }
}

/// Oracle first vertex for one curve.
pub fn oracle_vertex(f: &CurvePoly) -> Result<Vertex, ZetaError> {
    crate::zeta::l_polynomial(f)?.newton_polygon().first_vertex()
}

/// Evaluates every selected predictor on one curve.
pub fn verdict(
    f: &CurvePoly,
    predictors: &BTreeSet<Predictor>,
    oracle: Option<Vertex>,
    cache: &StructureCache,
) -> VerdictRecord {
    let vss = predictors.contains(&Predictor::Vss).then(|| match predict_with(f, cache, EntryRule::default()) {
        Ok(p) => VssVerdict { vertex: p.vertex, dim: Some(p.dim), density: Some(p.density), error: None },
        Err(e) => VssVerdict { vertex: None, dim: None, density: None, error: Some(e.to_string()) },
    });
    let hasse = predictors.contains(&Predictor::Hasse).then(|| classify(f));
    let vss_agrees = match (oracle, vss.as_ref().and_then(|v| v.vertex)) {
        (Some(o), Some(p)) => Some(o == p),
        _ => None,
    };
    let hasse_agrees = match (oracle, hasse.as_ref()) {
        (Some(o), Some(h)) => match (h.vertex, h.case.vertex(h.n)) {
            (Some(v), _) => Some(o == v),
            (None, Some(claimed)) => Some(o != claimed),
            (None, None) => None,
        },
        _ => None,
    };
    VerdictRecord {
        q_degree: f.ctx().degree(),
        genus: f.genus(),
        coeffs: f.encoding(),
        oracle,
        vss,
        hasse,
        vss_agrees,
        hasse_agrees,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictorTally {
    pub agree: u64,
    pub disagree: u64,
    /// No vertex from the predictor, or nothing to compare against.
    pub absent: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub records: u64,
    pub oracle: u64,
    pub vss: PredictorTally,
    pub hasse: PredictorTally,
}

impl SweepSummary {
    pub fn of(records: &[VerdictRecord]) -> Self {
        let mut s = SweepSummary { records: records.len() as u64, ..Default::default() };
        let tally = |t: &mut PredictorTally, flag: Option<bool>| match flag {
            Some(true) => t.agree += 1,
            Some(false) => t.disagree += 1,
            None => t.absent += 1,
        };
        for r in records {
            s.oracle += u64::from(r.oracle.is_some());
            if r.vss.is_some() {
                tally(&mut s.vss, r.vss_agrees);
            }
            if r.hasse.is_some() {
                tally(&mut s.hasse, r.hasse_agrees);
            }
        }
        s
    }

    pub fn disagreements(&self) -> u64 {
        self.vss.disagree + self.hasse.disagree
    }

    /// 0 when clean, 2 on a disagreement unless one is expected.
    pub fn exit_code(&self, expect_frontier: bool) -> i32 {
        if self.disagreements() > 0 && !expect_frontier {
            2
        } else {
            0
        }
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "records={} oracle={} vss(agree={} disagree={} absent={}) hasse(agree={} disagree={} absent={})",
            self.records,
            self.oracle,
            self.vss.agree,
            self.vss.disagree,
            self.vss.absent,
            self.hasse.agree,
            self.hasse.disagree,
            self.hasse.absent
        )
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub records: Vec<VerdictRecord>,
    pub summary: SweepSummary,
    pub elapsed_ms: u128,
}

/// Runs the sweep on a pool of `threads` workers (rayon's default when
/// `None`). Output order does not depend on the pool.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepOutcome, SweepError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| SweepError::Pool(e.to_string()))?;
    pool.install(|| run_in_pool(spec))
}

/// Reads NP2_THREADS.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("NP2_THREADS").ok().and_then(|v| v.parse().ok()).filter(|&t| t > 0)
}

fn run_in_pool(spec: &SweepSpec) -> Result<SweepOutcome, SweepError> {
    let start = Instant::now();
    let curves = spec.curves()?;
    let with_oracle = spec.predictors.contains(&Predictor::Oracle);
    let oracles: Vec<Option<Vertex>> = if with_oracle { oracle_all(&curves)? } else { vec![None; curves.len()] };
    let cache = StructureCache::default();
    let records: Vec<VerdictRecord> =
        curves.par_iter().zip(oracles.par_iter()).map(|(f, &o)| verdict(f, &spec.predictors, o, &cache)).collect();
    let summary = SweepSummary::of(&records);
    Ok(SweepOutcome { records, summary, elapsed_ms: start.elapsed().as_millis() })
}

/// Oracle vertices, through whole-family sum tables when a genus has enough
/// curves to pay for them.
fn oracle_all(curves: &[CurvePoly]) -> Result<Vec<Option<Vertex>>, SweepError> {
    let mut out = vec![None; curves.len()];
    let mut by_genus: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for (i, f) in curves.iter().enumerate() {
        by_genus.entry((f.ctx().degree(), f.genus())).or_default().push(i);
    }
    for ((a, g), idx) in by_genus {
        let bits = (g + 1) * a;
        let batch = bits <= BATCH_BITS && (idx.len() as u64) << 6 >= 1u64 << bits;
        if batch {
            let ctx = *curves[idx[0]].ctx();
            let tables: Vec<Vec<i64>> = (1..=g).map(|m| exponential_sums_all(&ctx, g, m)).collect::<Result<_, _>>()?;
            let vertices: Vec<Vertex> = idx
                .par_iter()
                .map(|&i| {
                    let code = curves[i].code() as usize;
                    let sums: Vec<i64> = tables.iter().map(|t| t[code]).collect();
                    LPolynomial::from_sums(a, g, &sums)?.newton_polygon().first_vertex()
                })
                .collect::<Result<_, ZetaError>>()?;
            for (&i, v) in idx.iter().zip(vertices) {
                out[i] = Some(v);
            }
        } else {
            for &i in &idx {
                out[i] = Some(oracle_vertex(&curves[i])?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected jsonl or csv")),
        }
    }
}

/// Column order of the CSV report. Vertices are split into x and y, with
/// y written as `num/den` when not an integer.
pub const CSV_COLUMNS: [&str; 16] = [
    "q_degree",
    "genus",
    "coeffs",
    "oracle_x",
    "oracle_y",
    "vss_x",
    "vss_y",
    "vss_dim",
    "vss_density",
    "vss_error",
    "hasse_case",
    "hasse_value",
    "hasse_x",
    "hasse_y",
    "vss_agrees",
    "hasse_agrees",
];

fn vertex_cells(v: Option<Vertex>) -> [String; 2] {
    v.map_or([String::new(), String::new()], |v| [v.x.to_string(), format_ratio(&v.y)])
}

fn flag(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

pub fn write_report<W: Write>(records: &[VerdictRecord], format: Format, out: W) -> Result<(), SweepError> {
    match format {
        Format::Jsonl => write_jsonl(records, out),
        Format::Csv => write_csv(records, out),
    }
}

pub fn write_jsonl<W: Write>(records: &[VerdictRecord], mut out: W) -> Result<(), SweepError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<VerdictRecord>, SweepError> {
    let mut records = Vec::new();
    for line in input.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[VerdictRecord], out: W) -> Result<(), SweepError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        let [ox, oy] = vertex_cells(r.oracle);
        let vss = r.vss.as_ref();
        let [vx, vy] = vertex_cells(vss.and_then(|v| v.vertex));
        let h = r.hasse.as_ref();
        let [hx, hy] = vertex_cells(h.and_then(|h| h.vertex));
        w.write_record([
            r.q_degree.to_string(),
            r.genus.to_string(),
            r.coeffs.clone(),
            ox,
            oy,
            vx,
            vy,
            vss.and_then(|v| v.dim).map(|d| d.to_string()).unwrap_or_default(),
            vss.and_then(|v| v.density).map(|d| format_ratio(&d.0)).unwrap_or_default(),
            vss.and_then(|v| v.error.clone()).unwrap_or_default(),
            h.map(|h| h.case.to_string()).unwrap_or_default(),
            h.and_then(|h| h.hasse).map(|v| v.to_string()).unwrap_or_default(),
            hx,
            hy,
            flag(r.vss_agrees),
            flag(r.hasse_agrees),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Agreement of one ladder case with the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseStats {
    pub curves: u64,
    /// Curves whose case polynomial is nonzero.
    pub fired: u64,
    pub agree: u64,
    pub disagree: u64,
    /// Curves where vss and the case both give a vertex.
    pub both_fired: u64,
    /// Of those, how many give the same vertex.
    pub both_equal: u64,
}

impl CaseStats {
    pub fn agreement_rate(&self) -> Option<f64> {
        let n = self.agree + self.disagree;
        (n > 0).then(|| self.agree as f64 / n as f64)
    }
}

/// Where the closed-form cases and vss part ways with the oracle.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FrontierReport {
    pub cases: BTreeMap<CaseId, CaseStats>,
    pub vss: PredictorTally,
    pub disagreements: Vec<VerdictRecord>,
}

impl FrontierReport {
    pub fn from_records(records: &[VerdictRecord]) -> Self {
        let mut report = FrontierReport::default();
        for r in records {
            if let Some(h) = &r.hasse {
                let s = report.cases.entry(h.case).or_default();
                s.curves += 1;
                s.fired += u64::from(h.vertex.is_some());
                match r.hasse_agrees {
                    Some(true) => s.agree += 1,
                    Some(false) => s.disagree += 1,
                    None => {}
                }
                if let (Some(hv), Some(vv)) = (h.vertex, r.vss.as_ref().and_then(|v| v.vertex)) {
                    s.both_fired += 1;
                    s.both_equal += u64::from(hv == vv);
                }
            }
            if r.vss.is_some() {
                match r.vss_agrees {
                    Some(true) => report.vss.agree += 1,
                    Some(false) => report.vss.disagree += 1,
                    None => report.vss.absent += 1,
                }
            }
            if r.disagrees() {
                report.disagreements.push(r.clone());
            }
        }
        report
    }

    pub fn merge(&mut self, other: FrontierReport) {
        for (case, s) in other.cases {
            let t = self.cases.entry(case).or_default();
            t.curves += s.curves;
            t.fired += s.fired;
            t.agree += s.agree;
            t.disagree += s.disagree;
            t.both_fired += s.both_fired;
            t.both_equal += s.both_equal;
        }
        self.vss.agree += other.vss.agree;
        self.vss.disagree += other.vss.disagree;
        self.vss.absent += other.vss.absent;
        self.disagreements.extend(other.disagreements);
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), SweepError> {
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    /// One line per case: curves, fired, agree/disagree and the rate.
    pub fn table(&self) -> String {
        let mut s = String::from("case          curves   fired   agree  disagree  rate\n");
        for (case, st) in &self.cases {
            let rate = st.agreement_rate().map_or("-".to_string(), |r| format!("{:.3}", r));
            s.push_str(&format!(
                "{:<12} {:>7} {:>7} {:>7} {:>9}  {}\n",
                case.as_str(),
                st.curves,
                st.fired,
                st.agree,
                st.disagree,
                rate
            ));
        }
        s
    }
}

/// The exhaustive zero-pattern sweep behind each second-theorem case at a
/// given n over F_2: the genus where the case lives, with the coefficients
/// its hypotheses force to vanish held at zero.
pub fn ladder_sweeps(n: u32) -> Vec<(CaseId, SweepSpec)> {
    let p = |k: u32| 1u32 << k;
    let genus = |d: u32| (d - 1) / 2;
    let lo = p(n) + 1;
    let mut out = Vec::new();
    let mut push = |case: CaseId, d: u32, extra_zero: Option<u32>| {
        let mut spec = SweepSpec::exhaustive(1, genus(d)).with_fixed(p(n) - 1, 0);
        if let Some(e) = extra_zero {
            spec = spec.with_fixed(e, 0);
        }
        out.push((case, spec));
    };
    for d in (lo..3 * p(n - 1) - 1).step_by(2) {
        let case = if d < 5 * p(n - 2) - 1 {
            CaseId::T2Ia
        } else if d < 3 * p(n - 1) - 5 {
            CaseId::T2Ib
        } else if d == 3 * p(n - 1) - 5 {
            CaseId::T2Ic
        } else {
            CaseId::T2Id
        };
        push(case, d, None);
    }
    for d in (3 * p(n - 1) - 1..p(n + 1) - 7).step_by(2) {
        push(CaseId::T2II, d, None);
    }
    push(CaseId::T2III, p(n + 1) - 7, None);
    push(CaseId::T2IV, p(n + 1) - 5, None);
    push(CaseId::T2V, p(n + 1) - 3, Some(3 * p(n - 1) - 1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_counts() {
        let spec = SweepSpec::exhaustive(1, 3);
        assert_eq!(spec.curves().unwrap().len(), 8);
        let spec = SweepSpec::exhaustive(2, 2);
        assert_eq!(spec.curves().unwrap().len(), 48);
        let spec = SweepSpec::exhaustive(1, 7).with_fixed(15, 1).with_fixed(1, 0);
        let curves = spec.curves().unwrap();
        assert_eq!(curves.len(), 64);
        assert!(curves.iter().all(|f| f.coeff(1).is_zero()));
        assert!(matches!(SweepSpec::exhaustive(1, 21).curves(), Err(SweepError::TooLarge { .. })));
        assert!(matches!(SweepSpec::exhaustive(1, 3).with_fixed(7, 0).curves(), Err(SweepError::ZeroLeading(7))));
        assert!(matches!(SweepSpec::exhaustive(1, 3).with_fixed(4, 1).curves(), Err(SweepError::BadFix { .. })));
    }

    #[test]
    fn curves_are_sorted_by_code() {
        let curves = SweepSpec::exhaustive(2, 2).curves().unwrap();
        assert!(curves.windows(2).all(|w| w[0].code() < w[1].code()));
    }

    #[test]
    fn random_is_seeded() {
        let spec = SweepSpec { domain: Domain::Random { seed: 42, count: 5 }, ..SweepSpec::exhaustive(1, 3) };
        let a: Vec<String> = spec.curves().unwrap().iter().map(CurvePoly::encoding).collect();
        let b: Vec<String> = spec.curves().unwrap().iter().map(CurvePoly::encoding).collect();
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
    }

    #[test]
    fn parsers() {
        assert_eq!(SweepSpec::parse_genus("3").unwrap(), (3, 3));
        assert_eq!(SweepSpec::parse_genus("3-8").unwrap(), (3, 8));
        assert!(SweepSpec::parse_genus("8-3").is_err());
        assert!(SweepSpec::parse_genus("0").is_err());
        assert_eq!(parse_predictors("oracle,hasse").unwrap(), [Predictor::Oracle, Predictor::Hasse].into());
        assert!(parse_predictors("oracle,magic").is_err());
        assert!(parse_predictors("").is_err());
    }

    #[test]
    fn small_sweep_is_clean() {
        let out = run_sweep(&SweepSpec::exhaustive(1, 3), Some(2)).unwrap();
        assert_eq!(out.summary.records, 8);
        assert_eq!(out.summary.disagreements(), 0);
        assert!(out.records.iter().all(|r| r.oracle == Some(Vertex::integral(3, 1))));
        assert_eq!(out.summary.exit_code(false), 0);
    }

    #[test]
    fn batched_oracle_matches_direct() {
        let spec = SweepSpec::exhaustive(2, 3).with_predictors([Predictor::Oracle]);
        let out = run_sweep(&spec, None).unwrap();
        for r in out.records.iter().step_by(17) {
            assert_eq!(r.oracle, Some(oracle_vertex(&r.curve().unwrap()).unwrap()));
        }
    }

    #[test]
    fn ladder_sweeps_at_n4() {
        let cases: Vec<(CaseId, u32)> = ladder_sweeps(4).iter().map(|(c, s)| (*c, s.genus_min)).collect();
        assert_eq!(
            cases,
            [
                (CaseId::T2Ia, 8),
                (CaseId::T2Ic, 9),
                (CaseId::T2Id, 10),
                (CaseId::T2II, 11),
                (CaseId::T2III, 12),
                (CaseId::T2IV, 13),
                (CaseId::T2V, 14)
            ]
        );
    }

    #[test]
    fn csv_header_only_when_empty() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn jsonl_round_trip() {
        let out = run_sweep(&SweepSpec::exhaustive(1, 4), None).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&out.records[..1], &mut buf).unwrap();
        assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), 1);
        assert_eq!(read_jsonl(buf.as_slice()).unwrap(), out.records[..1]);
    }
}
