//! Out(A_Γ) for a focused graph Γ with trivial symmetry: the free abelian
//! group generated by the images of the transvections τ_i = τ_{c x_i} and the
//! partial conjugations χ_j = χ_{c,P_j}, extended by the inversions.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::autos::RaagAutomorphism;
use crate::error::{Error, Result};
use crate::graph::{FocusedDecomposition, GraphRef, VertexSet};
use crate::matrix::{integer_rank, IntMatrix};
use crate::words::{normalize, GroupWord, Letter};

/// A basis element of the translation lattice; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisElement {
    Chi(usize),
    Tau(usize),
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::Chi(j) => write!(f, "chi{j}"),
            BasisElement::Tau(i) => write!(f, "tau{i}"),
        }
    }
}

/// Coordinates of an element of the translation lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    pub coords: Vec<i64>,
}

impl ExponentVector {
    pub fn zero(dim: usize) -> Self {
        ExponentVector { coords: vec![0; dim] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Element (u, h) of the semidirect product; `twist[v]` is the ι_v bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutElement {
    pub translation: ExponentVector,
    pub twist: Vec<bool>,
}

/// The group generated by the matrices of the inversions.
#[derive(Clone, Debug)]
pub struct AlphaImage {
    /// Matrix of every vertex inversion, indexed by vertex.
    pub generators: Vec<IntMatrix>,
    /// All elements, sorted.
    pub elements: Vec<IntMatrix>,
}

impl AlphaImage {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// Distinct non-identity generators.
    pub fn distinct_generators(&self) -> Vec<IntMatrix> {
        let set: BTreeSet<&IntMatrix> = self.generators.iter().filter(|g| !g.is_identity()).collect();
        set.into_iter().cloned().collect()
    }

    /// Closure of a set of commuting involutions.
    pub fn generate(generators: Vec<IntMatrix>, dim: usize) -> Self {
        let distinct: BTreeSet<IntMatrix> = generators.iter().cloned().collect();
        let mut elements: BTreeSet<IntMatrix> = BTreeSet::from([IntMatrix::identity(dim)]);
        let mut frontier: Vec<IntMatrix> = vec![IntMatrix::identity(dim)];
        while let Some(x) = frontier.pop() {
            for g in &distinct {
                let y = &x * g;
                if elements.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        AlphaImage {
            generators,
            elements: elements.into_iter().collect(),
        }
    }
}

/// Deliberate corruption of the closed-form α, used to exercise failure reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// α(ι_{x_i}) for non-adjacent x_i flips the sign of τ̄_i instead of sending it to χ̄_i − τ̄_i.
    Relation5,
}

/// Outcome of one relation family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyResult {
    pub index: usize,
    pub checks: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl FamilyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Results for relation families (1)-(6).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub families: Vec<FamilyResult>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.families.iter().all(FamilyResult::passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.families
            .iter()
            .map(|f| match &f.witness {
                None => format!("RELATION {} PASS checks={}", f.index, f.checks),
                Some(w) => format!(
                    "RELATION {} FAIL checks={} failures={} {w}",
                    f.index, f.checks, f.failures
                ),
            })
            .collect()
    }
}

/// The parameters (l, m, k) of a focused graph, which determine the
/// translation lattice, its ordered basis and the action of the inversions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FocusedShape {
    pub l: usize,
    pub m: usize,
    pub k: usize,
}

impl FocusedShape {
    pub fn new(l: usize, m: usize, k: usize) -> Result<Self> {
        if m < l || k < l || k == 0 {
            return Err(Error::Input(format!(
                "need m >= l, k >= l and k >= 1 (got l={l} m={m} k={k})"
            )));
        }
        Ok(FocusedShape { l, m, k })
    }

    pub fn dim(&self) -> usize {
        self.k + self.m - 1
    }

    /// (χ̄_1, τ̄_1, …, χ̄_l, τ̄_l, τ̄_{l+1}, …, τ̄_m, χ̄_{l+1}, …, χ̄_{k−1}); when
    /// k = l the pair for x_l carries only τ̄_l, since χ̄_l = χ̄_k is eliminated.
    pub fn basis(&self) -> Vec<BasisElement> {
        let (l, m, k) = (self.l, self.m, self.k);
        let mut basis = Vec::with_capacity(self.dim());
        for i in 1..=l {
            if i < k {
                basis.push(BasisElement::Chi(i));
            }
            basis.push(BasisElement::Tau(i));
        }
        basis.extend((l + 1..=m).map(BasisElement::Tau));
        basis.extend((l + 1..k).map(BasisElement::Chi));
        basis
    }

    pub fn position(&self, b: BasisElement) -> Option<usize> {
        self.basis().iter().position(|&x| x == b)
    }

    /// Positions of χ̄_1..χ̄_{k−1}.
    pub fn chi_positions(&self) -> Vec<usize> {
        let basis = self.basis();
        (1..self.k)
            .map(|j| basis.iter().position(|&x| x == BasisElement::Chi(j)).unwrap())
            .collect()
    }

    /// Positions of τ̄_1..τ̄_m.
    pub fn tau_positions(&self) -> Vec<usize> {
        let basis = self.basis();
        (1..=self.m)
            .map(|i| basis.iter().position(|&x| x == BasisElement::Tau(i)).unwrap())
            .collect()
    }

    /// χ̄_i in coordinates of span(χ̄_1..χ̄_{k−1}).
    pub fn chi_bar_w(&self, i: usize) -> Vec<i64> {
        let w = self.k - 1;
        if i <= w {
            (1..=w).map(|j| i64::from(i == j)).collect()
        } else {
            vec![-1; w]
        }
    }

    /// χ̄_i in basis coordinates (χ̄_k = −Σ_{j<k} χ̄_j).
    pub fn chi_bar(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        for (&pos, x) in self.chi_positions().iter().zip(self.chi_bar_w(i)) {
            v[pos] = x;
        }
        v
    }

    /// α(ι_c) = −I.
    pub fn alpha_c(&self) -> IntMatrix {
        -&IntMatrix::identity(self.dim())
    }

    /// α(ι_{x_i}): τ̄_i ↦ χ̄_i − τ̄_i for i ≤ l, τ̄_i ↦ −τ̄_i for i > l.
    pub fn alpha_x(&self, i: usize) -> IntMatrix {
        let mut a = IntMatrix::identity(self.dim());
        let col = self.tau_positions()[i - 1];
        if i <= self.l {
            for (row, x) in self.chi_bar(i).into_iter().enumerate() {
                a.set(row, col, x);
            }
        }
        a.set(col, col, -1);
        a
    }

    /// The group generated by α(ι_c) and the α(ι_{x_i}); every other
    /// inversion acts trivially.
    pub fn alpha_image(&self) -> AlphaImage {
        let mut gens = vec![self.alpha_c()];
        gens.extend((1..=self.m).map(|i| self.alpha_x(i)));
        AlphaImage::generate(gens, self.dim())
    }
}

/// The concrete model of Out(A_Γ) for a focused graph with trivial symmetry.
#[derive(Clone, Debug)]
pub struct FocusedModel {
    d: FocusedDecomposition,
    shape: FocusedShape,
    basis: Vec<BasisElement>,
    position: HashMap<BasisElement, usize>,
    fault: Option<Fault>,
}

impl FocusedModel {
    pub fn new(d: FocusedDecomposition) -> Result<Self> {
        if !d.trivial_automorphisms {
            return Err(Error::NontrivialSymmetry);
        }
        Self::lattice(d)
    }

    /// The model without the symmetry requirement. The translation lattice,
    /// `from_coords`, `exponent_vector` and the conjugator searches are valid
    /// for every focused graph; the α matrices and Out products describe
    /// Out(A_Γ) only when the graph has trivial symmetry.
    pub fn lattice(d: FocusedDecomposition) -> Result<Self> {
        let shape = FocusedShape::new(d.l(), d.m(), d.k())?;
        let basis = shape.basis();
        let position = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        Ok(FocusedModel {
            d,
            shape,
            basis,
            position,
            fault: None,
        })
    }

    /// Classifies `graph` and builds the model.
    pub fn from_graph(graph: impl Into<GraphRef>) -> Result<Self> {
        let g: GraphRef = graph.into();
        let d = crate::graph::classify_focused(g.clone()).map_err(|e| Error::NotFocused(e.describe(&g)))?;
        Self::new(d)
    }

    pub fn set_fault(&mut self, fault: Option<Fault>) {
        self.fault = fault;
    }

    pub fn decomposition(&self) -> &FocusedDecomposition {
        &self.d
    }

    pub fn graph(&self) -> &GraphRef {
        &self.d.graph
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn shape(&self) -> FocusedShape {
        self.shape
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn position(&self, b: BasisElement) -> Option<usize> {
        self.position.get(&b).copied()
    }

    fn focus(&self) -> usize {
        self.d.focus
    }

    /// τ_i: x_i ↦ c x_i.
    pub fn tau(&self, i: usize) -> RaagAutomorphism {
        RaagAutomorphism::transvection(self.graph(), self.focus(), self.d.x(i))
            .expect("c dominates every x_i")
    }

    /// χ_j: conjugation of P_j by c, for 1 ≤ j ≤ k.
    pub fn chi(&self, j: usize) -> RaagAutomorphism {
        let p: VertexSet = self.d.components[j - 1].iter().copied().collect();
        RaagAutomorphism::partial_conjugation(self.graph(), self.focus(), &p)
            .expect("P_j is a component of the star complement")
    }

    pub fn basis_automorphism(&self, b: BasisElement) -> RaagAutomorphism {
        match b {
            BasisElement::Chi(j) => self.chi(j),
            BasisElement::Tau(i) => self.tau(i),
        }
    }

    /// The automorphism Π τ_i^{r_i} Π χ_j^{s_j} representing a lattice point.
    pub fn from_coords(&self, w: &ExponentVector) -> Result<RaagAutomorphism> {
        if w.coords.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a lattice of rank {}",
                w.coords.len(),
                self.dim()
            )));
        }
        let mut f = RaagAutomorphism::identity(self.graph());
        for (&b, &e) in self.basis.iter().zip(&w.coords) {
            if e != 0 {
                f = self.basis_automorphism(b).pow(e).compose(&f)?;
            }
        }
        Ok(f)
    }

    /// Coordinates of the outer class of `f` in the translation lattice.
    ///
    /// τ-coordinates are read off the abelianization; the conjugation of `c`
    /// is peeled off `f`, and the χ-coordinates are read from the trailing
    /// power of `c` in the image of one vertex per component. Finally the
    /// quotient of `f` by the reconstructed product must be inner.
    pub fn exponent_vector(&self, f: &RaagAutomorphism) -> Result<ExponentVector> {
        let g = self.graph().clone();
        let c = self.focus();
        let (l, m, k) = (self.d.l(), self.d.m(), self.d.k());

        let a = f.abelianization_matrix();
        let r: Vec<i64> = (1..=m).map(|i| a.get(c, self.d.x(i))).collect();
        let mut expected = IntMatrix::identity(g.n());
        for i in 1..=m {
            expected.set(c, self.d.x(i), r[i - 1]);
        }
        if a != expected {
            return Err(Error::NotInPct(format!("abelianization is not unipotent along c: {a}")));
        }

        // f(c) = q c q⁻¹
        let mut w = f.image(c).letters().to_vec();
        let mut q: Vec<Letter> = Vec::new();
        while w.as_slice() != [Letter::pos(c)] {
            let step = w
                .iter()
                .filter(|y| y.vertex != c)
                .map(|&y| (y, normalize(&g, std::iter::once(y.inv()).chain(w.iter().copied()).chain([y]))))
                .find(|(_, shorter)| shorter.len() < w.len());
            let Some((y, shorter)) = step else {
                return Err(Error::NotInPct(format!(
                    "image of {} is not a conjugate of it",
                    g.vertex_name(c)
                )));
            };
            q.push(y);
            w = shorter;
        }
        let peeled = RaagAutomorphism::inner(&GroupWord::from_letters(&g, q))
            .inverse()
            .compose(f)?;

        let mut t = Vec::with_capacity(k);
        for (j, p) in self.d.components.iter().enumerate() {
            let v = p[0];
            let retracted = free_reduce(
                peeled
                    .image(v)
                    .letters()
                    .iter()
                    .copied()
                    .filter(|x| x.vertex == c || x.vertex == v),
            );
            let (lead, rest) = c_power_prefix(&retracted, c);
            let (trail, core) = c_power_suffix(rest, c);
            let shift = if j < l { r[j] } else { 0 };
            if core != [Letter::pos(v)] || lead + trail != shift {
                return Err(Error::NotInPct(format!(
                    "image of {} does not have the form c^a {} c^b",
                    g.vertex_name(v),
                    g.vertex_name(v)
                )));
            }
            t.push(-trail);
        }

        let mut coords = vec![0; self.dim()];
        for i in 1..=m {
            coords[self.position[&BasisElement::Tau(i)]] = r[i - 1];
        }
        for j in 1..k {
            coords[self.position[&BasisElement::Chi(j)]] = t[j - 1] - t[k - 1];
        }
        let vector = ExponentVector { coords };
        let residual = self.from_coords(&vector)?.inverse().compose(f)?;
        if residual.inner_conjugator().is_none() {
            return Err(Error::ResidualNotInner(residual.to_string()));
        }
        Ok(vector)
    }

    /// Closed-form matrix of conjugation by ι_v.
    pub fn closed_alpha(&self, v: usize) -> IntMatrix {
        if v == self.focus() {
            return self.shape.alpha_c();
        }
        match (1..=self.d.m()).find(|&i| self.d.x(i) == v) {
            Some(i) if i <= self.d.l() && self.fault == Some(Fault::Relation5) => {
                let mut a = IntMatrix::identity(self.dim());
                let col = self.shape.tau_positions()[i - 1];
                a.set(col, col, -1);
                a
            }
            Some(i) => self.shape.alpha_x(i),
            None => IntMatrix::identity(self.dim()),
        }
    }

    /// Matrix of conjugation by ι_v computed from words: column `b` is the
    /// exponent vector of ι_v ∘ b ∘ ι_v.
    pub fn empirical_alpha(&self, v: usize) -> Result<IntMatrix> {
        let dim = self.dim();
        let iota = RaagAutomorphism::inversion(self.graph(), v);
        let mut a = IntMatrix::zero(dim);
        for (col, &b) in self.basis.iter().enumerate() {
            let conj = iota.compose(&self.basis_automorphism(b))?.compose(&iota)?;
            let e = self.exponent_vector(&conj)?;
            for (row, x) in e.coords.into_iter().enumerate() {
                a.set(row, col, x);
            }
        }
        Ok(a)
    }

    /// Relation family governing ι_v acting on basis element `b`.
    pub fn relation_family(&self, v: usize, b: BasisElement) -> usize {
        let c = self.focus();
        match b {
            BasisElement::Chi(_) if v == c => 1,
            BasisElement::Tau(_) if v == c => 2,
            BasisElement::Chi(_) => 3,
            BasisElement::Tau(i) if self.d.x(i) == v => {
                if i <= self.d.l() {
                    5
                } else {
                    6
                }
            }
            BasisElement::Tau(_) => 4,
        }
    }

    /// α(ι_v), checked column by column against the closed form.
    pub fn alpha_matrix(&self, v: usize) -> Result<IntMatrix> {
        let empirical = self.empirical_alpha(v)?;
        let closed = self.closed_alpha(v);
        for (col, &b) in self.basis.iter().enumerate() {
            if empirical.column(col) != closed.column(col) {
                return Err(Error::Verification(format!(
                    "relation ({}) fails for {} acting on {b}",
                    self.relation_family(v, b),
                    self.graph().vertex_name(v)
                )));
            }
        }
        Ok(closed)
    }

    /// Checks relations (1)-(6) for every vertex and basis element.
    pub fn verify_inversion_relations(&self) -> Result<RelationReport> {
        let mut families: Vec<FamilyResult> = (1..=6)
            .map(|index| FamilyResult {
                index,
                checks: 0,
                failures: 0,
                witness: None,
            })
            .collect();
        for v in 0..self.graph().n() {
            let empirical = self.empirical_alpha(v)?;
            let closed = self.closed_alpha(v);
            for (col, &b) in self.basis.iter().enumerate() {
                let fam = &mut families[self.relation_family(v, b) - 1];
                fam.checks += 1;
                let got = empirical.column(col);
                let want = closed.column(col);
                if got != want {
                    fam.failures += 1;
                    fam.witness.get_or_insert_with(|| {
                        format!(
                            "iota_{} {b} iota_{} = {} expected {}",
                            self.graph().vertex_name(v),
                            self.graph().vertex_name(v),
                            ExponentVector { coords: got },
                            ExponentVector { coords: want }
                        )
                    });
                }
            }
        }
        Ok(RelationReport { families })
    }

    /// Rank of the lattice spanned by the exponent vectors of all τ_i and χ_j.
    pub fn computed_rank(&self) -> Result<usize> {
        let mut rows = Vec::new();
        for i in 1..=self.d.m() {
            rows.push(self.exponent_vector(&self.tau(i))?.coords);
        }
        for j in 1..=self.d.k() {
            rows.push(self.exponent_vector(&self.chi(j))?.coords);
        }
        Ok(integer_rank(&rows))
    }

    /// The group generated by the (closed-form) α matrices.
    pub fn alpha_image(&self) -> AlphaImage {
        let gens = (0..self.graph().n()).map(|v| self.closed_alpha(v)).collect();
        AlphaImage::generate(gens, self.dim())
    }

    /// Whether every element of the α image is, up to a global sign, block
    /// diagonal with an 𝓛 block, a diagonal sign block and a scalar block.
    /// Only meaningful when k > l; returns `None` otherwise.
    pub fn alpha_has_block_shape(&self, image: &AlphaImage) -> Option<bool> {
        let (l, m, k) = (self.d.l(), self.d.m(), self.d.k());
        if k <= l {
            return None;
        }
        let ok = image.elements.iter().all(|x| {
            [x.clone(), -x].iter().any(|y| {
                let mut parts: Vec<IntMatrix> = (0..l).map(|i| y.diagonal_block(2 * i, 2)).collect();
                let mid = y.diagonal_block(2 * l, m - l);
                let last = y.diagonal_block(l + m, k - l - 1);
                parts.push(mid.clone());
                parts.push(last.clone());
                IntMatrix::direct_sum(&parts) == *y
                    && parts[..l]
                        .iter()
                        .all(|b| b.is_identity() || *b == crate::matalg::script_l_block())
                    && mid.is_diagonal()
                    && (last.is_identity() || (-&last).is_identity())
            })
        });
        Some(ok)
    }

    /// α(h) for a twist vector.
    pub fn alpha_of_twist(&self, twist: &[bool]) -> IntMatrix {
        let mut a = IntMatrix::identity(self.dim());
        for (v, &bit) in twist.iter().enumerate() {
            if bit {
                a = &a * &self.closed_alpha(v);
            }
        }
        a
    }

    fn check_out(&self, x: &OutElement) -> Result<()> {
        if x.translation.coords.len() != self.dim() || x.twist.len() != self.graph().n() {
            return Err(Error::Dimension("element does not belong to this model".into()));
        }
        Ok(())
    }

    pub fn out_identity(&self) -> OutElement {
        OutElement {
            translation: ExponentVector::zero(self.dim()),
            twist: vec![false; self.graph().n()],
        }
    }

    /// (u, h)(u', h') = (u + α(h)u', h + h').
    pub fn out_multiply(&self, a: &OutElement, b: &OutElement) -> Result<OutElement> {
        self.check_out(a)?;
        self.check_out(b)?;
        let moved = self.alpha_of_twist(&a.twist).apply(&b.translation.coords);
        Ok(OutElement {
            translation: ExponentVector {
                coords: a.translation.coords.iter().zip(&moved).map(|(x, y)| x + y).collect(),
            },
            twist: a.twist.iter().zip(&b.twist).map(|(x, y)| x ^ y).collect(),
        })
    }

    /// (u, h)⁻¹ = (−α(h)u, h).
    pub fn out_inverse(&self, a: &OutElement) -> Result<OutElement> {
        self.check_out(a)?;
        let moved = self.alpha_of_twist(&a.twist).apply(&a.translation.coords);
        Ok(OutElement {
            translation: ExponentVector {
                coords: moved.into_iter().map(|x| -x).collect(),
            },
            twist: a.twist.clone(),
        })
    }

    /// β w β⁻¹ for a translation w, computed in the semidirect product.
    pub fn out_conjugate(&self, beta: &OutElement, w: &ExponentVector) -> Result<ExponentVector> {
        let as_element = OutElement {
            translation: w.clone(),
            twist: vec![false; self.graph().n()],
        };
        let product = self.out_multiply(&self.out_multiply(beta, &as_element)?, &self.out_inverse(beta)?)?;
        debug_assert!(product.twist.iter().all(|&b| !b));
        Ok(product.translation)
    }

    /// Innerness of a translation: exactly the zero vector.
    pub fn pct_inner_test(&self, w: &ExponentVector) -> bool {
        w.is_zero()
    }

    /// For each target, whether some inner automorphism γ_p with |p| ≤ `max_len`
    /// equals the automorphism of that lattice point. Exhaustive over words in
    /// normal form.
    ///
    /// Every lattice automorphism fixes the focus c, so a conjugator must
    /// centralize c and lies in ⟨st(c)⟩; since c is central there, deleting
    /// its letters changes neither γ_p nor lengthens p. The search therefore
    /// runs over words in lk(c) alone, falling back to all generators if some
    /// target moves c.
    pub fn bounded_conjugator_search(&self, targets: &[ExponentVector], max_len: usize) -> Result<Vec<bool>> {
        let c = self.focus();
        let g = self.graph().clone();
        let n = g.n();
        let mut images_of = Vec::with_capacity(targets.len());
        for t in targets {
            let f = self.from_coords(t)?;
            images_of.push((0..n).map(|v| f.image(v).normal_form().letters().to_vec()).collect::<Vec<_>>());
        }
        let fixes_c = images_of.iter().all(|im| im[c] == [Letter::pos(c)]);
        let alphabet: Vec<usize> = if fixes_c {
            g.link(c).into_iter().collect()
        } else {
            (0..n).collect()
        };
        Ok(conjugator_search(&g, &images_of, &alphabet, max_len))
    }

    /// The same search over every generator; slow, kept as a cross-check.
    pub fn unrestricted_conjugator_search(&self, targets: &[ExponentVector], max_len: usize) -> Result<Vec<bool>> {
        let g = self.graph().clone();
        let n = g.n();
        let mut images_of = Vec::with_capacity(targets.len());
        for t in targets {
            let f = self.from_coords(t)?;
            images_of.push((0..n).map(|v| f.image(v).normal_form().letters().to_vec()).collect::<Vec<_>>());
        }
        Ok(conjugator_search(&g, &images_of, &(0..n).collect::<Vec<_>>(), max_len))
    }
}

/// Marks each image tuple realized as v ↦ p v p⁻¹ by a normal-form word p
/// of length ≤ `max_len` over `alphabet`.
fn conjugator_search(
    g: &GraphRef,
    images_of: &[Vec<Vec<Letter>>],
    alphabet: &[usize],
    max_len: usize,
) -> Vec<bool> {
    let n = g.n();
    let mut wanted: HashMap<&[Vec<Letter>], Vec<usize>> = HashMap::new();
    for (i, im) in images_of.iter().enumerate() {
        wanted.entry(im.as_slice()).or_default().push(i);
    }
    // filter on one vertex before computing whole tuples
    let probe = (0..n)
        .max_by_key(|&v| images_of.iter().map(|im| &im[v]).collect::<HashSet<_>>().len())
        .unwrap_or(0);
    let probe_images: HashSet<&Vec<Letter>> = images_of.iter().map(|im| &im[probe]).collect();
    let mut found = vec![false; images_of.len()];
    let letters: Vec<Letter> = alphabet.iter().flat_map(|&v| [Letter::pos(v), Letter::neg(v)]).collect();
    let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
    while let Some(p) = stack.pop() {
        let conj = |x: usize| {
            normalize(
                g,
                p.iter()
                    .copied()
                    .chain([Letter::pos(x)])
                    .chain(p.iter().rev().map(|a| a.inv())),
            )
        };
        if probe_images.contains(&conj(probe)) {
            let images: Vec<Vec<Letter>> = (0..n).map(conj).collect();
            if let Some(idx) = wanted.get(images.as_slice()) {
                for &i in idx {
                    found[i] = true;
                }
            }
        }
        if p.len() < max_len {
            for &a in &letters {
                let mut q = p.clone();
                q.push(a);
                if normalize(g, q.iter().copied()) == q {
                    stack.push(q);
                }
            }
        }
    }
    found
}

fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for a in letters {
        if out.last() == Some(&a.inv()) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

fn c_power_prefix(w: &[Letter], c: usize) -> (i64, &[Letter]) {
    let n = w.iter().take_while(|a| a.vertex == c).count();
    (w[..n].iter().map(|a| a.sign()).sum(), &w[n..])
}

fn c_power_suffix(w: &[Letter], c: usize) -> (i64, &[Letter]) {
    let n = w.iter().rev().take_while(|a| a.vertex == c).count();
    let cut = w.len() - n;
    (w[cut..].iter().map(|a| a.sign()).sum(), &w[..cut])
}

impl PartialEq for FocusedModel {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.d.graph, &other.d.graph) && self.d.focus == other.d.focus
    }
}
