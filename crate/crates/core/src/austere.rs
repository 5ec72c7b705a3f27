//! The model Aut(A_Γ) ≅ A_Γ ⋊ I_Γ for austere Γ, and the involutions Φ
//! built from functions φ: V → I_Γ.
//!
//! An element is a pair (w, b) of a word w (the inner part, γ_v ↔ v) and an
//! inversion vector b. The vector b acts on words by inverting every letter
//! whose vertex bit is set, and (w, b)(w′, b′) = (w · b(w′), b + b′).

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autos::GeneratorInventory;
use crate::error::{Error, Result};
use crate::focused::{FamilyResult, RelationReport};
use crate::graph::{is_austere, AustereCertificate, GraphRef};
use crate::words::{normalize, Letter};
use crate::GroupWord;

/// An element of I_Γ ≅ (Z/2)^n, one bit per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InversionVector {
    pub bits: Vec<bool>,
}

impl InversionVector {
    pub fn zero(n: usize) -> Self {
        InversionVector { bits: vec![false; n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.bits[i] = true;
        v
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn add(&self, other: &Self) -> Self {
        InversionVector {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }
}

/// A generator of the presentation: γ_v (conjugation by v) or ι_v.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutGenerator {
    Gamma(usize),
    Iota(usize),
}

/// An element (w, b) of Aut(A_Γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutElement {
    pub word: GroupWord,
    pub bits: InversionVector,
}

impl fmt::Display for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self
            .bits
            .support()
            .iter()
            .map(|&v| self.word.graph().vertex_name(v).to_string())
            .collect();
        write!(f, "({}, {{{}}})", self.word, support.join(","))
    }
}

/// Deliberate breakage used to confirm the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AustereFault {
    /// Inversion vectors act trivially on words.
    TrivialAction,
}

/// The semidirect product model for a fixed austere graph.
#[derive(Clone, Debug)]
pub struct AustereModel {
    certificate: AustereCertificate,
    fault: Option<AustereFault>,
}

impl AustereModel {
    pub fn new(graph: impl Into<GraphRef>) -> Result<Self> {
        let g: GraphRef = graph.into();
        let certificate = is_austere(g.clone()).map_err(|r| Error::NotAustere(r.describe(&g)))?;
        Ok(AustereModel {
            certificate,
            fault: None,
        })
    }

    pub fn set_fault(&mut self, fault: Option<AustereFault>) {
        self.fault = fault;
    }

    pub fn graph(&self) -> &GraphRef {
        &self.certificate.graph
    }

    pub fn certificate(&self) -> &AustereCertificate {
        &self.certificate
    }

    pub fn n(&self) -> usize {
        self.graph().n()
    }

    pub fn identity(&self) -> AutElement {
        AutElement {
            word: GroupWord::identity(self.graph()),
            bits: InversionVector::zero(self.n()),
        }
    }

    pub fn element(&self, g: AutGenerator) -> AutElement {
        match g {
            AutGenerator::Gamma(v) => AutElement {
                word: GroupWord::generator(self.graph(), v),
                bits: InversionVector::zero(self.n()),
            },
            AutGenerator::Iota(v) => AutElement {
                word: GroupWord::identity(self.graph()),
                bits: InversionVector::unit(self.n(), v),
            },
        }
    }

    pub fn gamma(&self, v: usize) -> AutElement {
        self.element(AutGenerator::Gamma(v))
    }

    pub fn iota(&self, v: usize) -> AutElement {
        self.element(AutGenerator::Iota(v))
    }

    /// b(w): inverts the letters on vertices whose bit is set.
    fn act(&self, bits: &InversionVector, letters: &[Letter]) -> Vec<Letter> {
        letters
            .iter()
            .map(|&a| {
                if bits.get(a.vertex) && self.fault.is_none() {
                    a.inv()
                } else {
                    a
                }
            })
            .collect()
    }

    fn check_ambient(&self, x: &AutElement) -> Result<()> {
        if *x.word.graph().as_ref() == **self.graph() && x.bits.bits.len() == self.n() {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn multiply(&self, a: &AutElement, b: &AutElement) -> Result<AutElement> {
        self.check_ambient(a)?;
        self.check_ambient(b)?;
        let moved = self.act(&a.bits, b.word.letters());
        let letters = normalize(self.graph(), a.word.letters().iter().copied().chain(moved));
        Ok(AutElement {
            word: GroupWord::from_letters(self.graph(), letters),
            bits: a.bits.add(&b.bits),
        })
    }

    /// (w, b)^{-1} = (b(w^{-1}), b).
    pub fn inverse(&self, a: &AutElement) -> AutElement {
        let inv = a.word.inverse();
        AutElement {
            word: GroupWord::from_letters(self.graph(), normalize(self.graph(), self.act(&a.bits, inv.letters()))),
            bits: a.bits.clone(),
        }
    }

    pub fn equal(&self, a: &AutElement, b: &AutElement) -> Result<bool> {
        self.check_ambient(a)?;
        self.check_ambient(b)?;
        Ok(a.bits == b.bits && a.word.equals(&b.word)?)
    }

    pub fn is_identity(&self, a: &AutElement) -> bool {
        a.bits.is_zero() && a.word.normal_form().is_empty()
    }

    fn product(&self, factors: &[&AutElement]) -> AutElement {
        factors.iter().fold(self.identity(), |acc, x| {
            self.multiply(&acc, x).expect("elements of this model")
        })
    }

    /// [a, b] = a b a^{-1} b^{-1}.
    pub fn commutator(&self, a: &AutElement, b: &AutElement) -> AutElement {
        self.product(&[a, b, &self.inverse(a), &self.inverse(b)])
    }

    /// Evaluates one relator of family 7..=11 on the given generator images.
    fn relator(&self, family: usize, x: &AutElement, y: &AutElement) -> AutElement {
        match family {
            7 | 8 | 10 => self.commutator(x, y),
            9 => self.product(&[x, x]),
            11 => {
                let xy = self.product(&[x, y]);
                self.product(&[&xy, &xy])
            }
            _ => unreachable!("families are 7..=11"),
        }
    }

    /// Index tuples (family, first, second) of every relator in families (7)-(11).
    pub fn relators(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n();
        let g = self.graph();
        let mut out = Vec::new();
        for i in 0..n {
            for k in i + 1..n {
                if g.adjacent(i, k) {
                    out.push((7, i, k));
                }
            }
        }
        for j in 0..n {
            for l in j + 1..n {
                out.push((8, j, l));
            }
        }
        out.extend((0..n).map(|j| (9, j, j)));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push((10, i, j));
                }
            }
        }
        out.extend((0..n).map(|i| (11, i, i)));
        out
    }

    fn relator_inputs(family: usize, a: usize, b: usize) -> (AutGenerator, AutGenerator) {
        use AutGenerator::*;
        match family {
            7 => (Gamma(a), Gamma(b)),
            8 | 9 => (Iota(a), Iota(b)),
            10 => (Gamma(a), Iota(b)),
            _ => (Gamma(a), Iota(b)),
        }
    }

    fn describe_relator(&self, family: usize, a: usize, b: usize) -> String {
        let name = |v: usize| self.graph().vertex_name(v).to_string();
        match family {
            7 => format!("[γ_{}, γ_{}]", name(a), name(b)),
            8 => format!("[ι_{}, ι_{}]", name(a), name(b)),
            9 => format!("ι_{}²", name(a)),
            10 => format!("[γ_{}, ι_{}]", name(a), name(b)),
            _ => format!("(γ_{} ι_{})²", name(a), name(a)),
        }
    }

    /// Checks every relator with generators replaced by `image(generator)`.
    pub fn relations_under<F>(&self, mut image: F) -> RelationReport
    where
        F: FnMut(AutGenerator) -> AutElement,
    {
        let mut families: Vec<FamilyResult> = (7..=11)
            .map(|index| FamilyResult {
                index,
                checks: 0,
                failures: 0,
                witness: None,
            })
            .collect();
        for (family, a, b) in self.relators() {
            let (x, y) = Self::relator_inputs(family, a, b);
            let value = self.relator(family, &image(x), &image(y));
            let result = &mut families[family - 7];
            result.checks += 1;
            if !self.is_identity(&value) {
                result.failures += 1;
                result
                    .witness
                    .get_or_insert_with(|| format!("{} = {value}", self.describe_relator(family, a, b)));
            }
        }
        RelationReport { families }
    }

    /// Relation families (7)-(11) hold in the model.
    pub fn verify_presentation(&self) -> RelationReport {
        self.relations_under(|g| self.element(g))
    }

    /// Out(A_Γ) reduces to inversions: no transvections, no proper partial
    /// conjugations and no graph symmetries.
    pub fn out_is_inversions_only(&self) -> bool {
        let inventory = GeneratorInventory::of(self.graph());
        inventory.transvections.is_empty()
            && inventory.proper_partial_conjugations(self.graph()).is_empty()
            && inventory.graph_automorphisms.is_empty()
    }

    /// Positions (k, j) left free by conditions (i) and (ii), in lexicographic order.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        free_positions(self.graph())
    }

    /// n(n−1) − 2|E|.
    pub fn phi_exponent(&self) -> usize {
        let n = self.n();
        n * (n - 1) - 2 * self.graph().edge_count()
    }

    /// Number of admissible φ: 2^{n(n−1)−2|E|}.
    pub fn count_phi(&self) -> BigUint {
        BigUint::from(1u8) << self.phi_exponent()
    }

    /// Admissible φ in lexicographic order of their free bits.
    pub fn enumerate_phi(&self, limit: Option<usize>) -> PhiEnumerator {
        PhiEnumerator {
            n: self.n(),
            positions: self.free_positions(),
            state: Some(Vec::new()),
            remaining: limit,
        }
    }

    /// A uniformly random admissible φ.
    pub fn random_phi(&self, rng: &mut ChaCha8Rng) -> PhiFunction {
        let mut phi = PhiFunction::zero(self.n());
        for (k, j) in self.free_positions() {
            phi.rows[k].bits[j] = rng.gen_bool(0.5);
        }
        phi
    }

    /// For each vertex, an admissible φ nonzero exactly at that vertex.
    pub fn vertex_witnesses(&self) -> Vec<Option<PhiFunction>> {
        let positions = self.free_positions();
        (0..self.n())
            .map(|k| {
                positions.iter().find(|p| p.0 == k).map(|&(k, j)| {
                    let mut phi = PhiFunction::zero(self.n());
                    phi.rows[k].bits[j] = true;
                    phi
                })
            })
            .collect()
    }

    /// Builds Φ from a valid φ after checking it preserves every relator and squares to the identity.
    pub fn build_phi_automorphism(&self, phi: &PhiFunction) -> Result<PhiAutomorphism<'_>> {
        phi.validate(self.graph())?;
        let map = PhiAutomorphism {
            model: self,
            phi: phi.clone(),
        };
        let report = self.relations_under(|g| map.image(g));
        if let Some(f) = report.families.iter().find(|f| !f.passed()) {
            return Err(Error::Verification(format!(
                "Φ breaks relation family ({}): {}",
                f.index,
                f.witness.clone().unwrap_or_default()
            )));
        }
        if !map.is_involution() {
            return Err(Error::Verification("Φ² is not the identity".into()));
        }
        Ok(map)
    }

    /// Distinctness of the classes of Φ in Out(Aut(A_Γ)).
    pub fn phi_distinct_in_out(&self, phis: &[PhiFunction]) -> Result<DistinctReport> {
        let mut fingerprints = HashSet::new();
        let mut inner = 0;
        for phi in phis {
            phi.validate(self.graph())?;
            let map = PhiAutomorphism {
                model: self,
                phi: phi.clone(),
            };
            let fingerprint: Vec<InversionVector> = (0..self.n())
                .map(|k| map.apply(&self.gamma(k)).bits)
                .collect();
            if !phi.is_zero() && fingerprint.iter().all(InversionVector::is_zero) {
                inner += 1;
            }
            fingerprints.insert(fingerprint);
        }
        Ok(DistinctReport {
            total: phis.len(),
            classes: fingerprints.len(),
            inner_failures: inner,
        })
    }
}

pub(crate) fn free_positions(g: &crate::SimplicialGraph) -> Vec<(usize, usize)> {
    let n = g.n();
    (0..n)
        .flat_map(|k| (0..n).filter(move |&j| j != k && !g.adjacent(k, j)).map(move |j| (k, j)))
        .collect()
}

/// A function φ from vertices to I_Γ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiFunction {
    pub rows: Vec<InversionVector>,
}

impl PhiFunction {
    pub fn zero(n: usize) -> Self {
        PhiFunction {
            rows: vec![InversionVector::zero(n); n],
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(InversionVector::is_zero)
    }

    /// Condition (i): bit k of φ(k) is clear. Condition (ii): bit j of φ(k)
    /// is clear whenever v_j and v_k are adjacent.
    pub fn validate(&self, g: &crate::SimplicialGraph) -> Result<()> {
        if self.n() != g.n() || self.rows.iter().any(|r| r.bits.len() != g.n()) {
            return Err(Error::Dimension(format!("φ must be {0}×{0}", g.n())));
        }
        for (k, row) in self.rows.iter().enumerate() {
            if row.get(k) {
                return Err(Error::PhiCondition {
                    condition: "(i)",
                    index: k + 1,
                    bit: k + 1,
                });
            }
            if let Some(j) = row.support().into_iter().find(|&j| g.adjacent(k, j)) {
                return Err(Error::PhiCondition {
                    condition: "(ii)",
                    index: k + 1,
                    bit: j + 1,
                });
            }
        }
        Ok(())
    }

    /// Parses lines `phi k : j1 j2 ...` with 1-based indices; missing rows are zero.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut phi = PhiFunction::zero(n);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let rest = line
                .strip_prefix("phi")
                .ok_or_else(|| err(format!("expected `phi k : ...`, got {line:?}")))?;
            let (k, bits) = rest.split_once(':').ok_or_else(|| err("missing ':'".into()))?;
            let index = |s: &str| -> Result<usize> {
                match s.trim().parse::<usize>() {
                    Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
                    _ => Err(err(format!("index {s:?} outside 1..={n}"))),
                }
            };
            let k = index(k)?;
            for j in bits.split_whitespace() {
                phi.rows[k].bits[index(j)?] = true;
            }
        }
        Ok(phi)
    }
}

impl fmt::Display for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.rows.iter().enumerate() {
            let bits: Vec<String> = row.support().iter().map(|j| (j + 1).to_string()).collect();
            writeln!(f, "phi {} : {}", k + 1, bits.join(" "))?;
        }
        Ok(())
    }
}

/// Streams admissible φ in lexicographic order of the free bits.
pub struct PhiEnumerator {
    n: usize,
    positions: Vec<(usize, usize)>,
    /// Set bits of the next φ, as indices into `positions`; `None` when exhausted.
    state: Option<Vec<bool>>,
    remaining: Option<usize>,
}

impl Iterator for PhiEnumerator {
    type Item = PhiFunction;

    fn next(&mut self) -> Option<PhiFunction> {
        if self.remaining == Some(0) {
            return None;
        }
        let bits = self.state.as_mut()?;
        if bits.is_empty() {
            bits.resize(self.positions.len(), false);
        }
        let mut phi = PhiFunction::zero(self.n);
        for (&(k, j), &b) in self.positions.iter().zip(bits.iter()) {
            phi.rows[k].bits[j] = b;
        }
        // odometer increment, last position least significant
        match bits.iter().rposition(|b| !b) {
            Some(i) => {
                bits[i] = true;
                bits[i + 1..].iter_mut().for_each(|b| *b = false);
            }
            None => self.state = None,
        }
        if let Some(r) = self.remaining.as_mut() {
            *r -= 1;
        }
        Some(phi)
    }
}

/// The automorphism Φ of Aut(A_Γ) with Φ(γ_k) = (γ_k, φ(k)) and Φ(ι_k) = ι_k.
#[derive(Clone, Debug)]
pub struct PhiAutomorphism<'a> {
    model: &'a AustereModel,
    pub phi: PhiFunction,
}

impl PhiAutomorphism<'_> {
    pub fn image(&self, g: AutGenerator) -> AutElement {
        match g {
            AutGenerator::Gamma(k) => AutElement {
                word: GroupWord::generator(self.model.graph(), k),
                bits: self.phi.rows[k].clone(),
            },
            AutGenerator::Iota(_) => self.model.element(g),
        }
    }

    /// Extends Φ multiplicatively: (w, b) = γ-word · ι-product.
    pub fn apply(&self, x: &AutElement) -> AutElement {
        let m = self.model;
        let mut out = m.identity();
        for &a in x.word.letters() {
            let img = self.image(AutGenerator::Gamma(a.vertex));
            let img = if a.inverse { m.inverse(&img) } else { img };
            out = m.multiply(&out, &img).expect("same model");
        }
        m.multiply(
            &out,
            &AutElement {
                word: GroupWord::identity(m.graph()),
                bits: x.bits.clone(),
            },
        )
        .expect("same model")
    }

    /// Φ² fixes every generator.
    pub fn is_involution(&self) -> bool {
        (0..self.model.n()).all(|v| {
            [AutGenerator::Gamma(v), AutGenerator::Iota(v)].into_iter().all(|g| {
                let x = self.model.element(g);
                self.model
                    .equal(&self.apply(&self.apply(&x)), &x)
                    .expect("same model")
            })
        })
    }
}

/// Outcome of the distinctness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctReport {
    pub total: usize,
    pub classes: usize,
    /// Nonzero φ whose Φ keeps every γ inside the inner part.
    pub inner_failures: usize,
}

impl DistinctReport {
    pub fn passed(&self) -> bool {
        self.classes == self.total && self.inner_failures == 0
    }
}

/// Memoized checks of relation preservation and Φ² = id across many φ.
///
/// Each relator involves at most two γ generators, so its value under Φ
/// depends only on the corresponding rows of φ.
pub struct PhiChecker<'a> {
    model: &'a AustereModel,
    relators: Vec<(usize, usize, usize)>,
    pair_cache: HashMap<(usize, usize, usize, InversionVector, InversionVector), bool>,
    row_cache: HashMap<(usize, InversionVector), bool>,
}

/// Accumulated results of [`PhiChecker::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhiTally {
    pub checked: usize,
    pub relation_failures: usize,
    pub involution_failures: usize,
    pub first_failure: Option<String>,
}

impl<'a> PhiChecker<'a> {
    pub fn new(model: &'a AustereModel) -> Self {
        PhiChecker {
            model,
            relators: model.relators(),
            pair_cache: HashMap::new(),
            row_cache: HashMap::new(),
        }
    }

    fn row(&self, phi: &PhiFunction, g: AutGenerator) -> InversionVector {
        match g {
            AutGenerator::Gamma(k) => phi.rows[k].clone(),
            AutGenerator::Iota(_) => InversionVector::zero(0),
        }
    }

    pub fn check(&mut self, phi: &PhiFunction, tally: &mut PhiTally) {
        let model = self.model;
        let map = PhiAutomorphism {
            model,
            phi: phi.clone(),
        };
        tally.checked += 1;
        let mut relations_ok = true;
        for &(family, a, b) in &self.relators {
            let (x, y) = AustereModel::relator_inputs(family, a, b);
            let key = (family, a, b, self.row(phi, x), self.row(phi, y));
            let ok = *self.pair_cache.entry(key).or_insert_with(|| {
                model.is_identity(&model.relator(family, &map.image(x), &map.image(y)))
            });
            if !ok && relations_ok {
                relations_ok = false;
                tally
                    .first_failure
                    .get_or_insert_with(|| format!("φ breaks {}", model.describe_relator(family, a, b)));
            }
        }
        if !relations_ok {
            tally.relation_failures += 1;
        }
        let mut involution_ok = true;
        for k in 0..model.n() {
            let key = (k, phi.rows[k].clone());
            let ok = *self.row_cache.entry(key).or_insert_with(|| {
                let x = model.gamma(k);
                model.equal(&map.apply(&map.apply(&x)), &x).expect("same model")
            });
            involution_ok &= ok;
        }
        if !involution_ok {
            tally.involution_failures += 1;
            tally.first_failure.get_or_insert_with(|| "Φ² ≠ id".into());
        }
    }
}

/// Seeded generator for sampled φ.
pub fn phi_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
