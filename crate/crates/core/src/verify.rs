//! Property suites over built-in families and seeded random instances.
//!
//! Each check produces one [`CheckRecord`]; the CLI prints them as JSON lines.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::decomposition::enumerate_descriptors;
use crate::analysis::{
    classify, decomposition_bounds, dij_bounds, end_rank, extension_degree, find_polarization, ns_basis,
    picard_g2_oracle, picard_number, AnalysisError, DecompositionDescriptor, Factor, SearchParams,
};
use crate::generate::{
    cm_pair, cm_power, named_field, noncm_cubic_power, random, random_over, rho_zero_instance, transformed,
    GenerationError, FIELD_NAMES,
};
use crate::instance::Precision;
use crate::torus::{direct_sum, dual, PeriodMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    OracleG2,
    Invariance,
    Bounds,
    Theorems,
    Decomposition,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::OracleG2, Suite::Invariance, Suite::Bounds, Suite::Theorems, Suite::Decomposition];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleG2 => "oracle-g2",
            Suite::Invariance => "invariance",
            Suite::Bounds => "bounds",
            Suite::Theorems => "theorems",
            Suite::Decomposition => "decomposition",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}; expected one of oracle-g2, invariance, bounds, theorems, decomposition"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub instance: String,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
}

/// Suite configuration; the defaults are the sizes the suites are specified at.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub precision: Precision,
    pub search: SearchParams,
    pub oracle_instances: usize,
    pub invariance_instances: usize,
    pub transforms: usize,
    pub band_instances: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            precision: Precision::default(),
            search: SearchParams::default(),
            oracle_instances: 200,
            invariance_instances: 10,
            transforms: 20,
            band_instances: 50,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Generation(#[from] GenerationError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

struct Recorder<'a> {
    suite: Suite,
    sink: &'a mut dyn FnMut(CheckRecord),
    failures: usize,
}

impl Recorder<'_> {
    fn record(&mut self, check: &str, instance: &str, expected: Value, got: Value, pass: bool) {
        if !pass {
            self.failures += 1;
        }
        (self.sink)(CheckRecord {
            suite: self.suite.name().into(),
            check: check.into(),
            instance: instance.into(),
            expected,
            got,
            pass,
        });
    }

    fn eq<T: Serialize + PartialEq>(&mut self, check: &str, instance: &str, expected: T, got: T) {
        let pass = expected == got;
        self.record(check, instance, json!(expected), json!(got), pass);
    }
}

/// Runs a suite, streaming records to `sink`; returns the number of failed checks.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, sink: &mut dyn FnMut(CheckRecord)) -> Result<usize, SuiteError> {
    let mut rec = Recorder { suite, sink, failures: 0 };
    match suite {
        Suite::OracleG2 => oracle_g2(cfg, &mut rec)?,
        Suite::Invariance => invariance(cfg, &mut rec)?,
        Suite::Bounds => bounds(cfg, &mut rec)?,
        Suite::Theorems => theorems(cfg, &mut rec)?,
        Suite::Decomposition => decomposition(cfg, &mut rec)?,
    }
    Ok(rec.failures)
}

/// Seeded genus-two instances over the built-in fields of degree ≤ 4.
pub fn oracle_instances(cfg: &SuiteConfig) -> Result<Vec<(String, PeriodMatrix)>, GenerationError> {
    let fields = FIELD_NAMES
        .iter()
        .map(|n| named_field(n, cfg.precision).map(|k| (*n, k)))
        .collect::<Result<Vec<_>, _>>()?;
    (0..cfg.oracle_instances)
        .map(|i| {
            let (name, k) = &fields[i % fields.len()];
            let p = random_over(k, 2, i as u64, cfg.precision)?;
            Ok((format!("random({name}, 2, seed {i})"), p))
        })
        .collect()
}

fn oracle_g2(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<(), SuiteError> {
    for (name, p) in oracle_instances(cfg)? {
        let oracle = picard_g2_oracle(&p)?;
        rec.eq("rho_equals_g2_formula", &name, oracle, picard_number(&p).0);
    }
    Ok(())
}

/// The ten base instances of the invariance suite.
pub fn invariance_instances(cfg: &SuiteConfig) -> Result<Vec<(String, PeriodMatrix)>, GenerationError> {
    let pr = cfg.precision;
    let mut out = vec![
        ("cm_power(-1, 2)".to_string(), cm_power(-1, 2, pr)?),
        ("noncm_cubic_power(2)".to_string(), noncm_cubic_power(2, pr)?),
        ("cm_pair".to_string(), cm_pair(pr)?),
        ("cm_power(-2, 3)".to_string(), cm_power(-2, 3, pr)?),
        ("noncm_cubic_power(3)".to_string(), noncm_cubic_power(3, pr)?),
    ];
    for (i, name) in FIELD_NAMES.iter().enumerate() {
        let seed = 1000 + i as u64;
        out.push((format!("random({name}, 2, seed {seed})"), random(name, 2, seed, pr)?));
    }
    out.truncate(cfg.invariance_instances);
    Ok(out)
}

fn invariants(p: &PeriodMatrix) -> (usize, usize, usize) {
    (picard_number(p).0, extension_degree(p), end_rank(p))
}

fn invariance(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<(), SuiteError> {
    for (idx, (name, p)) in invariance_instances(cfg)?.into_iter().enumerate() {
        let base = invariants(&p);
        for t in 0..cfg.transforms {
            let seed = (idx * 1000 + t) as u64;
            let q = transformed(&p, seed)?;
            let got = invariants(&q);
            rec.eq("rho_d_end_invariant", &format!("transformed({name}, seed {seed})"), base, got);
        }
        let d = dual(&p).map_err(GenerationError::from)?;
        rec.eq("dual_rho_d_invariant", &format!("dual({name})"), (base.0, base.1), (picard_number(&d).0, extension_degree(&d)));
    }
    Ok(())
}

/// Family of the bound checks: name, instance, and whether equality is expected.
fn bound_instances(cfg: &SuiteConfig) -> Result<Vec<(String, PeriodMatrix, bool)>, GenerationError> {
    let pr = cfg.precision;
    let mut out = Vec::new();
    for g in 2..=4 {
        out.push((format!("cm_power(-1, {g})"), cm_power(-1, g, pr)?, true));
        out.push((format!("noncm_cubic_power({g})"), noncm_cubic_power(g, pr)?, true));
    }
    out.push(("cm_pair".into(), cm_pair(pr)?, false));
    out.push(("rho_zero_deg16".into(), rho_zero_instance(pr)?, false));
    let sample = SuiteConfig { oracle_instances: cfg.oracle_instances.min(40), ..*cfg };
    out.extend(oracle_instances(&sample)?.into_iter().map(|(n, p)| (n, p, false)));
    for (i, (name, p)) in invariance_instances(cfg)?.into_iter().enumerate() {
        out.push((format!("transformed({name}, seed {i})"), transformed(&p, i as u64)?, false));
    }
    Ok(out)
}

fn bounds(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<(), SuiteError> {
    for (name, p, tight) in bound_instances(cfg)? {
        let rho = picard_number(&p).0;
        let b = dij_bounds(&p)?;
        let rho_q = BigRational::from_integer(rho.into());
        rec.record("bound_dij_le_rho", &name, json!({ "le": rho }), json!(b.bound_dij), b.bound_dij <= rho as i64);
        rec.record(
            "bound_degree_le_rho",
            &name,
            json!({ "le": rho }),
            json!(b.bound_degree.to_string()),
            b.bound_degree <= rho_q,
        );
        if tight {
            rec.eq("bound_dij_tight", &name, rho as i64, b.bound_dij);
            rec.eq("bound_degree_tight", &name, rho_q.to_string(), b.bound_degree.to_string());
        }
    }
    Ok(())
}

fn theorems(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<(), SuiteError> {
    let pr = cfg.precision;
    for g in 1..=4 {
        let name = format!("cm_power(-1, {g})");
        let p = cm_power(-1, g, pr)?;
        let r = classify(&p, &cfg.search)?;
        rec.eq("rho_maximal", &name, g * g, r.rho);
        rec.eq("degree_two", &name, 2, r.degree_d);
        rec.eq("end_rank_maximal", &name, 2 * g * g, r.end_rank);
        rec.eq("polarization_found", &name, true, r.polarization.is_found());
    }
    for g in 2..=4 {
        let name = format!("noncm_cubic_power({g})");
        let p = noncm_cubic_power(g, pr)?;
        let r = classify(&p, &cfg.search)?;
        rec.eq("rho_self_product", &name, g * (g + 1) / 2, r.rho);
        rec.eq("degree_three", &name, 3, r.degree_d);
        rec.eq("end_rank_matrix_algebra", &name, g * g, r.end_rank);
    }
    {
        let p = cm_pair(pr)?;
        let r = classify(&p, &cfg.search)?;
        rec.eq("rho_degree_four", "cm_pair", 2, r.rho);
        rec.eq("degree_four", "cm_pair", 4, r.degree_d);
        rec.eq("end_rank_sum", "cm_pair", 4, r.end_rank);
        let k = p.field();
        let e1 = crate::torus::diagonal(k, &[p.entry(0, 0).clone()], pr.policy()).map_err(GenerationError::from)?;
        let e2 = crate::torus::diagonal(k, &[p.entry(1, 1).clone()], pr.policy()).map_err(GenerationError::from)?;
        let sum = direct_sum(&e1, &e2).map_err(GenerationError::from)?;
        rec.eq("additivity", "cm_pair", picard_number(&e1).0 + picard_number(&e2).0, picard_number(&sum).0);
    }
    {
        let p = rho_zero_instance(pr)?;
        let r = classify(&p, &cfg.search)?;
        rec.eq("rho_zero", "rho_zero_deg16", 0, r.rho);
        rec.eq("rho_zero_oracle", "rho_zero_deg16", 0, picard_g2_oracle(&p)?);
        rec.eq("degree_sixteen", "rho_zero_deg16", 16, r.degree_d);
        rec.record("rho_below_g_needs_degree_five", "rho_zero_deg16", json!({ "ge": 5 }), json!(r.degree_d), r.degree_d >= 5);
    }
    for (label, elliptic, cm) in [("gaussian", cm_power(-1, 1, pr)?, true), ("cubic", noncm_cubic_power(1, pr)?, false)] {
        let mut x = elliptic.clone();
        for g in 2..=3 {
            x = direct_sum(&x, &elliptic).map_err(GenerationError::from)?;
            let name = format!("direct_sum({label})^{g}");
            let (rho, end) = if cm { (g * g, 2 * g * g) } else { (g * (g + 1) / 2, g * g) };
            rec.eq("self_product_rho", &name, rho, picard_number(&x).0);
            rec.eq("self_product_end_rank", &name, end, end_rank(&x));
        }
    }
    let cubic = named_field("cubic", pr)?;
    for i in 0..cfg.band_instances {
        let g = 2 + i % 2;
        let seed = 5000 + i as u64;
        let p = random_over(&cubic, g, seed, pr)?;
        let (rho, rank_t) = picard_number(&p);
        let name = format!("random(cubic, {g}, seed {seed})");
        rec.record(
            "degree_three_band",
            &name,
            json!({ "ge": g * (g + 1) / 2, "lt": g * g }),
            json!(rho),
            g * (g + 1) / 2 <= rho && rho < g * g,
        );
        rec.eq("rank_nullity", &name, 2 * g * g - g, rank_t + rho);
        rec.eq("ns_basis_size", &name, rho, ns_basis(&p).len());
        // classify fails on any inconsistent verdict
        let ok = classify(&p, &cfg.search).is_ok();
        rec.eq("verdicts_consistent", &name, true, ok);
    }
    {
        let p = noncm_cubic_power(2, pr)?;
        let pol = find_polarization(&p, &ns_basis(&p), &cfg.search);
        rec.eq("polarization_found", "noncm_cubic_power(2)", true, pol.is_found());
    }
    Ok(())
}

fn decomposition(cfg: &SuiteConfig, rec: &mut Recorder) -> Result<(), SuiteError> {
    for g in 1..=8 {
        let mut holds = 0usize;
        let mut characterized = 0usize;
        let mut prop_ok = 0usize;
        let all = enumerate_descriptors(g);
        for d in &all {
            let r = decomposition_bounds(d)?;
            holds += usize::from(r.lemma_holds);
            characterized += usize::from(r.lemma_equality == r.lemma_equality_predicted);
            let tight_expected = g == 1 || (d.factors.len() == 1 && d.factors[0].cm);
            prop_ok += usize::from(r.prop_bound <= g * g && (r.prop_bound == g * g) == tight_expected);
        }
        let name = format!("all descriptors, g = {g}");
        rec.eq("lemma_inequality", &name, all.len(), holds);
        rec.eq("lemma_equality_characterization", &name, all.len(), characterized);
        rec.eq("prop_bound_at_most_g_squared", &name, all.len(), prop_ok);
    }
    let pr = cfg.precision;
    for g in 2..=4 {
        for (cm, p) in [(true, cm_power(-1, g, pr)?), (false, noncm_cubic_power(g, pr)?)] {
            let d = DecompositionDescriptor::new(vec![Factor { n: 1, k: g, cm }]);
            let r = decomposition_bounds(&d)?;
            let rho = picard_number(&p).0;
            let name = if cm { format!("cm_power(-1, {g})") } else { format!("noncm_cubic_power({g})") };
            rec.eq("prop_bound_tight", &name, rho, r.prop_bound);
            let cap = &r.caps[0].cap;
            rec.record(
                "factor_cap_holds",
                &name,
                json!({ "le": cap.to_string() }),
                json!(rho),
                BigRational::from_integer(rho.into()) <= *cap,
            );
        }
    }
    Ok(())
}
