//! End-to-end verification runs producing line-oriented reports.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::atlas::{GraphCatalog, GraphClass};
use crate::austere::{AustereFault, AustereModel, PhiChecker, PhiFunction, PhiTally};
use crate::error::{Error, Result};
use crate::focused::{ExponentVector, Fault, FocusedModel, FocusedShape, OutElement};
use crate::graph::{classify_focused, cycle_notation, automorphisms, is_austere, GraphRef};
use crate::matalg::{
    build_centralizer, cbar_infinite_witness, centralizer_bruteforce, group_ball, is_alpha_inner,
    DEFAULT_WORK_LIMIT,
};
use crate::{IntMatrix, RaagAutomorphism};

/// Default seed for randomized checks.
pub const DEFAULT_SEED: u64 = 0x5eed_2a4f;

/// A deliberately broken model, used to confirm that checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectedFault {
    /// α(ι_{x_i}) for i ≤ l loses its χ̄_i component.
    Relation5,
    /// Inversion vectors stop inverting letters.
    AustereAction,
}

/// Parameters of a verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Entry bound for the brute-force centralizer.
    pub bound: i64,
    /// Maximal conjugator length in the inner-automorphism search.
    pub word_len: usize,
    /// Number of powers in the infinitude witness.
    pub t_max: u32,
    pub seed: u64,
    /// Entry range for the inner-test sweep.
    pub inner_range: i64,
    /// The inner-test sweep runs when the rank is at most this.
    pub inner_max_rank: usize,
    /// The brute-force centralizer runs when the lattice dimension is at most this.
    pub bruteforce_max_dim: usize,
    pub work_limit: u64,
    /// Random semidirect-product samples.
    pub out_samples: usize,
    /// Random lattice products checked for torsion.
    pub torsion_samples: usize,
    /// φ checked exhaustively when the exponent is at most this.
    pub phi_exhaustive_exponent: usize,
    /// φ compared pairwise exhaustively when the exponent is at most this.
    pub phi_distinct_exponent: usize,
    /// Prefix and random sample sizes otherwise.
    pub phi_sample: usize,
    pub fault: Option<InjectedFault>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bound: 3,
            word_len: 6,
            t_max: 10,
            seed: DEFAULT_SEED,
            inner_range: 2,
            inner_max_rank: 4,
            bruteforce_max_dim: 6,
            work_limit: DEFAULT_WORK_LIMIT,
            out_samples: 200,
            torsion_samples: 20,
            phi_exhaustive_exponent: 20,
            phi_distinct_exponent: 12,
            phi_sample: 2048,
            fault: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bound <= 0 || self.word_len == 0 || self.t_max == 0 || self.inner_range < 0 {
            return Err(Error::Input("bounds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

/// One report line: `<label> <status> <detail>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    fn skip(label: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            label: label.into(),
            status: Status::Skip,
            detail: detail.into(),
        }
    }

    fn line(&self) -> String {
        if self.detail.is_empty() {
            format!("{} {}", self.label, self.status)
        } else {
            format!("{} {} {}", self.label, self.status, self.detail)
        }
    }
}

/// A verification report for one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub header: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn find(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for line in self.header.iter().cloned().chain(self.checks.iter().map(Check::line)) {
            out.push_str(&line);
            out.push('\n');
        }
        let verdict = match self.first_failure() {
            None => "RESULT PASS".to_string(),
            Some(c) => format!("RESULT FAIL first={}", c.label),
        };
        out.push_str(&verdict);
        out.push('\n');
        out
    }
}

fn header(g: &GraphRef, cfg: &RunConfig) -> Vec<String> {
    let edges: Vec<String> = g
        .edges()
        .map(|(u, v)| format!("{}-{}", g.vertex_name(u), g.vertex_name(v)))
        .collect();
    vec![
        format!("# raagkit verify seed={}", cfg.seed),
        format!(
            "# bounds bound={} word_len={} t_max={} inner_range={}",
            cfg.bound, cfg.word_len, cfg.t_max, cfg.inner_range
        ),
        format!("GRAPH {} n={} edges={}", g.name(), g.n(), edges.join(",")),
    ]
}

/// Classifies `graph` and runs every check that applies to its class.
pub fn verify_graph(graph: impl Into<GraphRef>, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let g: GraphRef = graph.into();
    let mut checks = Vec::new();
    if g.n() > 1 {
        if let Ok(cert) = is_austere(g.clone()) {
            checks.push(Check::new("CLASSIFY", true, cert.to_string()));
            verify_austere(&g, cfg, &mut checks)?;
            return Ok(Report {
                header: header(&g, cfg),
                checks,
            });
        }
    }
    match classify_focused(g.clone()) {
        Ok(d) => {
            checks.push(Check::new("CLASSIFY", true, d.summary()));
            verify_focused(&g, cfg, &mut checks)?;
        }
        Err(reason) => {
            let austere = match is_austere(g.clone()) {
                Ok(_) => "n = 1".to_string(),
                Err(r) => r.describe(&g),
            };
            checks.push(Check::new(
                "CLASSIFY",
                false,
                format!("not focused: {}; not austere: {austere}", reason.describe(&g)),
            ));
        }
    }
    Ok(Report {
        header: header(&g, cfg),
        checks,
    })
}

fn all_vectors(dim: usize, range: i64) -> Vec<ExponentVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-range..=range).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|coords| ExponentVector { coords }).collect()
}

/// M^t = I for some t ≤ 4·dim.
fn has_small_order(m: &IntMatrix) -> bool {
    let mut p = m.clone();
    for _ in 0..4 * m.dim().max(1) {
        if p.is_identity() {
            return true;
        }
        p = &p * m;
    }
    false
}

fn verify_focused(g: &GraphRef, cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let d = classify_focused(g.clone()).map_err(|e| Error::NotFocused(e.describe(g)))?;
    let shape = FocusedShape::new(d.l(), d.m(), d.k())?;
    let expected_rank = d.rank();

    let alpha = if d.trivial_automorphisms {
        let mut model = FocusedModel::new(d.clone())?;
        if cfg.fault == Some(InjectedFault::Relation5) {
            model.set_fault(Some(Fault::Relation5));
        }
        let report = model.verify_inversion_relations()?;
        for f in &report.families {
            let detail = match &f.witness {
                None => format!("checks={}", f.checks),
                Some(w) => format!("checks={} failures={} {w}", f.checks, f.failures),
            };
            checks.push(Check::new(format!("RELATION {}", f.index), f.passed(), detail));
        }
        let rank = model.computed_rank()?;
        checks.push(Check::new(
            format!("RANK {rank}"),
            rank == expected_rank,
            format!("expected={expected_rank}"),
        ));
        let alpha = model.alpha_image();
        let closed = shape.alpha_image();
        checks.push(Check::new(
            format!("ALPHA_ORDER {}", alpha.order()),
            alpha.elements == closed.elements,
            format!("generators={}", alpha.distinct_generators().len()),
        ));
        checks.push(out_group_check(&model, cfg)?);
        checks.push(torsion_check(&model, cfg)?);
        checks.push(inner_test_check(&model, cfg)?);
        alpha
    } else {
        let p = automorphisms(g, Some(2)).swap_remove(1);
        checks.push(Check::skip(
            "RELATIONS",
            format!("graph symmetry {}; shape-level checks only", cycle_notation(g, &p)),
        ));
        let alpha = shape.alpha_image();
        checks.push(Check::new(
            format!("ALPHA_ORDER {}", alpha.order()),
            true,
            "closed form",
        ));
        alpha
    };

    let description = build_centralizer(&shape, &alpha);
    let description = match description {
        Ok(desc) => {
            checks.push(Check::new(
                "CENTRALIZER_GENERATORS",
                true,
                format!("count={}", desc.all().len()),
            ));
            desc
        }
        Err(e) => {
            checks.push(Check::new("CENTRALIZER_GENERATORS", false, e.to_string()));
            return Ok(());
        }
    };
    if shape.dim() <= cfg.bruteforce_max_dim {
        match centralizer_bruteforce(&alpha.generators, shape.dim(), cfg.bound, cfg.work_limit) {
            Ok(brute) => {
                let ball = group_ball(&description, 6, cfg.bound)?;
                checks.push(Check::new(
                    "CENTRALIZER",
                    brute == ball,
                    format!("bound={} bruteforce={} ball={}", cfg.bound, brute.len(), ball.len()),
                ));
            }
            Err(e @ Error::WorkLimit { .. }) => checks.push(Check::skip("CENTRALIZER", e.to_string())),
            Err(e) => return Err(e),
        }
    } else {
        checks.push(Check::skip(
            "CENTRALIZER",
            format!("dimension {} above brute-force range {}", shape.dim(), cfg.bruteforce_max_dim),
        ));
    }

    let mut inner_ok = true;
    let mut detail = Vec::new();
    for a in &alpha.elements {
        inner_ok &= is_alpha_inner(a, &alpha)?;
    }
    detail.push(format!("alpha={}", alpha.order()));
    let infinite: Vec<IntMatrix> = description
        .word_generators()
        .into_iter()
        .filter(|m| !has_small_order(m))
        .collect();
    for m in &infinite {
        inner_ok &= !is_alpha_inner(m, &alpha)?;
    }
    detail.push(format!("infinite_generators={}", infinite.len()));
    checks.push(Check::new("INNER_CLASSIFICATION", inner_ok, detail.join(" ")));

    if shape.k >= 3 {
        let w = cbar_infinite_witness(&shape, &alpha, cfg.t_max)?;
        checks.push(Check::new(
            "CBAR_WITNESS",
            w.passed(),
            match &w.failure {
                None => format!("t_max={} shear={}", cfg.t_max, w.matrix),
                Some(why) => why.clone(),
            },
        ));
    } else {
        checks.push(Check::skip("CBAR_WITNESS", format!("k={} < 3", shape.k)));
    }
    Ok(())
}

fn random_out(model: &FocusedModel, rng: &mut ChaCha8Rng) -> OutElement {
    OutElement {
        translation: ExponentVector {
            coords: (0..model.dim()).map(|_| rng.gen_range(-3..=3)).collect(),
        },
        twist: (0..model.graph().n()).map(|_| rng.gen_bool(0.5)).collect(),
    }
}

/// Group axioms of the semidirect product and β w β⁻¹ = α(h)w on random samples.
fn out_group_check(model: &FocusedModel, cfg: &RunConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = 0;
    for _ in 0..cfg.out_samples {
        let (a, b, c) = (
            random_out(model, &mut rng),
            random_out(model, &mut rng),
            random_out(model, &mut rng),
        );
        let left = model.out_multiply(&model.out_multiply(&a, &b)?, &c)?;
        let right = model.out_multiply(&a, &model.out_multiply(&b, &c)?)?;
        let unit = model.out_multiply(&a, &model.out_inverse(&a)?)?;
        let w = random_out(model, &mut rng).translation;
        let conj = model.out_conjugate(&a, &w)?;
        let direct = model.alpha_of_twist(&a.twist).apply(&w.coords);
        if left != right || unit != model.out_identity() || conj.coords != direct {
            failures += 1;
        }
    }
    Ok(Check::new(
        "OUT_GROUP",
        failures == 0,
        format!("samples={} failures={failures}", cfg.out_samples),
    ))
}

/// Random nontrivial products of τ_i and χ_j have no torsion up to the sixth power.
fn torsion_check(model: &FocusedModel, cfg: &RunConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7045);
    let basis = model.basis().to_vec();
    let mut tested = 0;
    let mut failures = Vec::new();
    for _ in 0..cfg.torsion_samples {
        let mut f = RaagAutomorphism::identity(model.graph());
        for _ in 0..rng.gen_range(1..=4) {
            let b = model.basis_automorphism(basis[rng.gen_range(0..basis.len())]);
            let b = if rng.gen_bool(0.5) { b.inverse() } else { b };
            f = f.compose(&b)?;
        }
        if f.is_identity() {
            continue;
        }
        tested += 1;
        if let Some(t) = (1..=6).find(|&t| f.pow(t).is_identity()) {
            failures.push(format!("{f} has order {t}"));
        }
    }
    let mut detail = format!("samples={tested} max_power=6 failures={}", failures.len());
    if let Some(w) = failures.first() {
        detail.push_str(&format!(" witness={w}"));
    }
    Ok(Check::new("TORSION", failures.is_empty(), detail))
}

/// pct_inner_test against the bounded conjugator search on a full box of vectors.
fn inner_test_check(model: &FocusedModel, cfg: &RunConfig) -> Result<Check> {
    if model.dim() > cfg.inner_max_rank {
        return Ok(Check::skip(
            "INNER_TEST",
            format!("rank {} above sweep range {}", model.dim(), cfg.inner_max_rank),
        ));
    }
    let vectors = all_vectors(model.dim(), cfg.inner_range);
    let found = model.bounded_conjugator_search(&vectors, cfg.word_len)?;
    let disagreements: Vec<&ExponentVector> = vectors
        .iter()
        .zip(&found)
        .filter(|(v, &f)| model.pct_inner_test(v) != f)
        .map(|(v, _)| v)
        .collect();
    let mut detail = format!(
        "vectors={} word_len={} disagreements={}",
        vectors.len(),
        cfg.word_len,
        disagreements.len()
    );
    if let Some(v) = disagreements.first() {
        detail.push_str(&format!(" witness={v}"));
    }
    Ok(Check::new("INNER_TEST", disagreements.is_empty(), detail))
}

fn verify_austere(g: &GraphRef, cfg: &RunConfig, checks: &mut Vec<Check>) -> Result<()> {
    let mut model = AustereModel::new(g.clone())?;
    if cfg.fault == Some(InjectedFault::AustereAction) {
        model.set_fault(Some(AustereFault::TrivialAction));
    }
    for f in &model.verify_presentation().families {
        let detail = match &f.witness {
            None => format!("checks={}", f.checks),
            Some(w) => format!("checks={} failures={} {w}", f.checks, f.failures),
        };
        checks.push(Check::new(format!("RELATION {}", f.index), f.passed(), detail));
    }
    checks.push(Check::new(
        "INVENTORY",
        model.out_is_inversions_only(),
        "Out(A_Γ) generated by inversions",
    ));

    let n = model.n();
    let exponent = model.phi_exponent();
    let count = model.count_phi();
    checks.push(Check::new(
        "COUNT_PHI",
        model.free_positions().len() == exponent,
        format!("exponent={exponent} count={count}"),
    ));
    if exponent <= cfg.phi_exhaustive_exponent {
        let enumerated = model.enumerate_phi(None).count();
        checks.push(Check::new(
            "COUNT_ENUMERATION",
            BigUint::from(enumerated) == count,
            format!("enumerated={enumerated}"),
        ));
    } else {
        checks.push(Check::skip(
            "COUNT_ENUMERATION",
            format!("exponent {exponent} > {}", cfg.phi_exhaustive_exponent),
        ));
    }
    let two = BigUint::from(2u8);
    checks.push(Check::new(
        "VERTEX_BOUND",
        n > 1 && count >= two.pow(n as u32),
        format!("count >= 2^{n}"),
    ));
    let max_degree = g.max_degree();
    let degree_exponent = n * (n - max_degree - 1);
    checks.push(Check::new(
        "DEGREE_BOUND",
        count >= two.pow(degree_exponent as u32),
        format!("count >= 2^{degree_exponent} (max valence {max_degree})"),
    ));

    let (phis, mode) = if exponent <= cfg.phi_exhaustive_exponent {
        (model.enumerate_phi(None).collect::<Vec<_>>(), "exhaustive".to_string())
    } else {
        (phi_sample(&model, cfg), format!("sample seed={}", cfg.seed))
    };
    let mut checker = PhiChecker::new(&model);
    let mut tally = PhiTally::default();
    for phi in &phis {
        checker.check(phi, &mut tally);
    }
    let first = tally.first_failure.clone().map(|w| format!(" {w}")).unwrap_or_default();
    checks.push(Check::new(
        "PHI_RELATIONS",
        tally.relation_failures == 0,
        format!("checked={} mode={mode} failures={}{first}", tally.checked, tally.relation_failures),
    ));
    checks.push(Check::new(
        "PHI_INVOLUTION",
        tally.involution_failures == 0,
        format!("checked={} failures={}", tally.checked, tally.involution_failures),
    ));

    let distinct_phis = if exponent <= cfg.phi_distinct_exponent {
        phis
    } else {
        phis.into_iter().take(cfg.phi_sample).collect()
    };
    let report = model.phi_distinct_in_out(&distinct_phis)?;
    checks.push(Check::new(
        "PHI_DISTINCT",
        report.passed(),
        format!(
            "classes={} phis={} inner={}",
            report.classes, report.total, report.inner_failures
        ),
    ));
    let witnesses = model.vertex_witnesses();
    let missing = witnesses.iter().filter(|w| w.is_none()).count();
    let mut valid = true;
    for w in witnesses.iter().flatten() {
        valid &= model.build_phi_automorphism(w).is_ok();
    }
    checks.push(Check::new(
        "VERTEX_WITNESS",
        missing == 0 && valid,
        format!("vertices={n} missing={missing}"),
    ));
    Ok(())
}

/// The first `phi_sample` φ in enumeration order followed by `phi_sample`
/// seeded random ones, without repeats.
fn phi_sample(model: &AustereModel, cfg: &RunConfig) -> Vec<PhiFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let prefix = model.enumerate_phi(Some(cfg.phi_sample));
    let random = (0..cfg.phi_sample).map(|_| model.random_phi(&mut rng)).collect::<Vec<_>>();
    for phi in prefix.chain(random) {
        if seen.insert(phi.clone()) {
            out.push(phi);
        }
    }
    out
}

/// Verifies every focused and austere record of a catalog. Reports are
/// concatenated in catalog order.
pub fn verify_catalog(catalog: &GraphCatalog, cfg: &RunConfig) -> Result<(String, usize, usize)> {
    let targets: Vec<_> = catalog
        .records
        .iter()
        .filter(|r| r.class != GraphClass::Other)
        .collect();
    let reports: Vec<Report> = targets
        .par_iter()
        .map(|r| verify_graph(r.graph.clone(), cfg))
        .collect::<Result<_>>()?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let text = reports.iter().map(Report::text).collect::<Vec<_>>().join("\n");
    Ok((text, reports.len(), failed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{asymmetric_tree, build_focused, named};

    #[test]
    fn focused_graph_passes() {
        let g = build_focused(1, 1, &[asymmetric_tree()]).unwrap();
        let report = verify_graph(g, &RunConfig::default()).unwrap();
        assert!(report.passed(), "{}", report.text());
        assert!(report.find("RELATION 5").is_some());
        assert_eq!(report.find("INNER_TEST").unwrap().status, Status::Pass);
    }

    #[test]
    fn relation5_fault_is_reported() {
        let g = build_focused(1, 1, &[asymmetric_tree()]).unwrap();
        let cfg = RunConfig {
            fault: Some(InjectedFault::Relation5),
            ..RunConfig::default()
        };
        let report = verify_graph(g, &cfg).unwrap();
        assert_eq!(report.first_failure().unwrap().label, "RELATION 5");
    }

    #[test]
    fn unclassifiable_graph_fails_classification() {
        let report = verify_graph(named::claw(), &RunConfig::default()).unwrap();
        assert_eq!(report.first_failure().unwrap().label, "CLASSIFY");
    }

    #[test]
    fn reports_are_deterministic() {
        let g = build_focused(2, 2, &[]).unwrap();
        let cfg = RunConfig::default();
        assert_eq!(
            verify_graph(g.clone(), &cfg).unwrap().text(),
            verify_graph(g, &cfg).unwrap().text()
        );
    }

    #[test]
    fn bad_config_is_rejected() {
        let cfg = RunConfig {
            bound: 0,
            ..RunConfig::default()
        };
        assert!(matches!(verify_graph(named::claw(), &cfg), Err(Error::Input(_))));
    }
}
