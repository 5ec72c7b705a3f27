//! Integer matrix algebra around the centralizer 𝒞 of α(I_Γ) in GL_{k+m−1}(Z).
//!
//! Write W = span(χ̄_1, …, χ̄_{k−1}). Every element of 𝒞 has the form
//! M(A, λ, μ) with A ∈ GL(W), λ ∈ {±1}^l, μ ∈ {±1}^{m−l}:
//!
//! * M acts on W as A,
//! * M τ̄_i = (Aχ̄_i − λ_i χ̄_i)/2 + λ_i τ̄_i for i ≤ l,
//! * M τ̄_i = μ_i τ̄_i for i > l,
//!
//! where integrality forces Aχ̄_i ≡ χ̄_i (mod 2) for i ≤ l. The map
//! (A, λ, μ) ↦ M(A, λ, μ) is an injective homomorphism.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::focused::{AlphaImage, FocusedShape};
use crate::matrix::IntMatrix;

/// Default node budget for [`centralizer_bruteforce`].
pub const DEFAULT_WORK_LIMIT: u64 = 1_000_000_000;

/// Environment variable overriding the brute-force work limit.
pub const WORK_LIMIT_ENV: &str = "RAAGKIT_WORK_LIMIT";

/// Work limit from the environment, falling back to [`DEFAULT_WORK_LIMIT`].
pub fn work_limit_from_env() -> u64 {
    std::env::var(WORK_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_WORK_LIMIT)
}

/// The nontrivial 𝓛 block [[1,1],[0,−1]].
pub fn script_l_block() -> IntMatrix {
    IntMatrix::from_rows(vec![vec![1, 1], vec![0, -1]]).expect("static matrix")
}

/// Block-diagonal element of 𝓛 with the nontrivial block wherever `bits` is set.
pub fn script_l_element(bits: &[bool]) -> IntMatrix {
    let blocks: Vec<IntMatrix> = bits
        .iter()
        .map(|&b| if b { script_l_block() } else { IntMatrix::identity(2) })
        .collect();
    IntMatrix::direct_sum(&blocks)
}

/// Membership in 𝓛 ⊂ GL_{2l}(Z).
pub fn in_script_l(m: &IntMatrix) -> bool {
    if !m.dim().is_multiple_of(2) {
        return false;
    }
    let l = m.dim() / 2;
    let bits: Vec<bool> = (0..l).map(|i| m.diagonal_block(2 * i, 2) == script_l_block()).collect();
    script_l_element(&bits) == *m
}

/// All 2^l elements of 𝓛.
pub fn script_l_group(l: usize) -> Vec<IntMatrix> {
    (0..1u64 << l)
        .map(|mask| script_l_element(&(0..l).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>()))
        .collect()
}

/// The generators of 𝓛 as an [`AlphaImage`].
pub fn script_l_image(l: usize) -> AlphaImage {
    let gens = (0..l)
        .map(|i| script_l_element(&(0..l).map(|j| i == j).collect::<Vec<_>>()))
        .collect();
    AlphaImage::generate(gens, 2 * l)
}

/// Unimodular and congruent to the identity mod 2.
pub fn is_level2(m: &IntMatrix) -> bool {
    m.is_unimodular()
        && (0..m.dim()).all(|i| (0..m.dim()).all(|j| (m.get(i, j) - i64::from(i == j)).rem_euclid(2) == 0))
}

/// θ: Λ_l[2] → C(𝓛) ⊂ GL_{2l}(Z). Block (i,j) is [[A_ij, (A_ij − δ_ij)/2], [0, δ_ij]].
pub fn theta(a: &IntMatrix) -> Result<IntMatrix> {
    let l = a.dim();
    let mut out = IntMatrix::zero(2 * l);
    for i in 0..l {
        for j in 0..l {
            let delta = i64::from(i == j);
            let x = a.get(i, j);
            if (x - delta).rem_euclid(2) != 0 {
                return Err(Error::Input(format!(
                    "entry ({}, {}) = {x} has the wrong parity for a level 2 matrix",
                    i + 1,
                    j + 1
                )));
            }
            out.set(2 * i, 2 * j, x);
            out.set(2 * i, 2 * j + 1, (x - delta) / 2);
            out.set(2 * i + 1, 2 * j + 1, delta);
        }
    }
    if !a.is_unimodular() {
        return Err(Error::NotUnimodular(a.det()));
    }
    Ok(out)
}

/// ξ(f_i): −I_2 in block `i` (1-based) of GL_{2l}(Z), identity elsewhere.
pub fn xi(l: usize, i: usize) -> Result<IntMatrix> {
    if i == 0 || i > l {
        return Err(Error::Input(format!("ξ index {i} outside 1..={l}")));
    }
    let mut diag = vec![1; 2 * l];
    diag[2 * i - 2] = -1;
    diag[2 * i - 1] = -1;
    Ok(IntMatrix::diagonal(&diag))
}

/// θ(A)·ξ(bits).
pub fn theta_xi(a: &IntMatrix, bits: &[bool]) -> Result<IntMatrix> {
    let mut m = theta(a)?;
    for (i, &b) in bits.iter().enumerate() {
        if b {
            m = &m * &xi(bits.len(), i + 1)?;
        }
    }
    Ok(m)
}

/// Inverse of [`theta_xi`] on C(𝓛): returns `(A, bits)` with θ(A)ξ(bits) = M.
pub fn theta_xi_decompose(m: &IntMatrix) -> Option<(IntMatrix, Vec<bool>)> {
    if !m.dim().is_multiple_of(2) {
        return None;
    }
    let l = m.dim() / 2;
    let bits: Vec<bool> = (0..l).map(|i| m.get(2 * i + 1, 2 * i + 1) == -1).collect();
    // θ(A)ξ(S) acts on χ̄ as A·D_S
    let mut a = IntMatrix::zero(l);
    for i in 0..l {
        for (j, &bit) in bits.iter().enumerate() {
            let sign = if bit { -1 } else { 1 };
            a.set(i, j, m.get(2 * i, 2 * j) * sign);
        }
    }
    if !is_level2(&a) {
        return None;
    }
    (theta_xi(&a, &bits).ok()? == *m).then_some((a, bits))
}

/// Embeds M(A, λ, μ) into GL_{k+m−1}(Z) in the basis of `shape`.
pub fn embed(shape: &FocusedShape, a: &IntMatrix, lambda: &[i64], mu: &[i64]) -> Result<IntMatrix> {
    let (l, m, k) = (shape.l, shape.m, shape.k);
    if a.dim() != k - 1 || lambda.len() != l || mu.len() != m - l {
        return Err(Error::Dimension(format!(
            "embedding needs A of size {}, {l} λ signs and {} μ signs",
            k - 1,
            m - l
        )));
    }
    if lambda.iter().chain(mu).any(|&s| s != 1 && s != -1) {
        return Err(Error::Input("λ and μ entries must be ±1".into()));
    }
    if !a.is_unimodular() {
        return Err(Error::NotUnimodular(a.det()));
    }
    let chi = shape.chi_positions();
    let tau = shape.tau_positions();
    let mut out = IntMatrix::zero(shape.dim());
    for (c, &pc) in chi.iter().enumerate() {
        for (r, &pr) in chi.iter().enumerate() {
            out.set(pr, pc, a.get(r, c));
        }
    }
    for i in 1..=l {
        let chi_i = shape.chi_bar_w(i);
        let image = a.apply(&chi_i);
        let lam = lambda[i - 1];
        for (r, &pr) in chi.iter().enumerate() {
            let diff = image[r] - lam * chi_i[r];
            if diff % 2 != 0 {
                return Err(Error::Input(format!(
                    "A does not fix χ̄_{i} mod 2, so M(A, λ, μ) is not integral"
                )));
            }
            out.set(pr, tau[i - 1], diff / 2);
        }
        out.set(tau[i - 1], tau[i - 1], lam);
    }
    for i in l + 1..=m {
        out.set(tau[i - 1], tau[i - 1], mu[i - l - 1]);
    }
    Ok(out)
}

/// Recovers (A, λ, μ) from an element of the centralizer, if it has that form.
pub fn decompose(shape: &FocusedShape, mat: &IntMatrix) -> Option<(IntMatrix, Vec<i64>, Vec<i64>)> {
    let chi = shape.chi_positions();
    let tau = shape.tau_positions();
    let mut a = IntMatrix::zero(shape.k - 1);
    for (r, &pr) in chi.iter().enumerate() {
        for (c, &pc) in chi.iter().enumerate() {
            a.set(r, c, mat.get(pr, pc));
        }
    }
    let lambda: Vec<i64> = tau[..shape.l].iter().map(|&p| mat.get(p, p)).collect();
    let mu: Vec<i64> = tau[shape.l..].iter().map(|&p| mat.get(p, p)).collect();
    let rebuilt = embed(shape, &a, &lambda, &mu).ok()?;
    (rebuilt == *mat).then_some((a, lambda, mu))
}

/// Generators of the centralizer 𝒞 of α(I_Γ), grouped by role.
#[derive(Clone, Debug)]
pub struct CentralizerDescription {
    pub shape: FocusedShape,
    /// θ-images of I + 2E_ab and of D_a, for a, b ≤ l.
    pub lambda_part: Vec<IntMatrix>,
    /// ξ(f_i) for i ≤ l.
    pub sign_part: Vec<IntMatrix>,
    /// Sign flips of τ̄_{l+1..m}.
    pub diag_part: Vec<IntMatrix>,
    /// I + 2E_ab on W with a > l ≥ b: couplings of the free χ̄ into the constrained ones.
    pub coupling_part: Vec<IntMatrix>,
    /// Shears I + E_ab on W with b > l, sign changes D_a with a > l, and a
    /// cyclic permutation of the free χ̄.
    pub gl_part: Vec<IntMatrix>,
}

impl CentralizerDescription {
    pub fn all(&self) -> Vec<IntMatrix> {
        [
            &self.lambda_part,
            &self.sign_part,
            &self.diag_part,
            &self.coupling_part,
            &self.gl_part,
        ]
        .into_iter()
        .flatten()
        .cloned()
        .collect()
    }

    /// Generators not of the form M(D, λ, μ) with D diagonal.
    pub fn word_generators(&self) -> Vec<IntMatrix> {
        self.all()
            .into_iter()
            .filter(|g| !is_sign_element(&self.shape, g))
            .collect()
    }

    /// The finite subgroup {M(D, λ, μ) : D diagonal}, of order 2^{k−1+m}.
    pub fn sign_subgroup(&self) -> Vec<IntMatrix> {
        let s = &self.shape;
        let w = s.k - 1;
        let total = w + s.m;
        let mut out: Vec<IntMatrix> = (0..1u64 << total)
            .map(|mask| {
                let bit = |i: usize| if mask >> i & 1 == 1 { -1 } else { 1 };
                let d = IntMatrix::diagonal(&(0..w).map(bit).collect::<Vec<_>>());
                let lambda: Vec<i64> = (w..w + s.l).map(bit).collect();
                let mu: Vec<i64> = (w + s.l..total).map(bit).collect();
                embed(s, &d, &lambda, &mu).expect("diagonal signs always embed")
            })
            .collect();
        out.sort();
        out
    }
}

fn is_sign_element(shape: &FocusedShape, m: &IntMatrix) -> bool {
    decompose(shape, m).is_some_and(|(a, _, _)| a.is_diagonal())
}

impl fmt::Display for CentralizerDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            ("lambda", &self.lambda_part),
            ("sign", &self.sign_part),
            ("diag", &self.diag_part),
            ("coupling", &self.coupling_part),
            ("gl", &self.gl_part),
        ];
        for (name, gens) in parts {
            for g in gens {
                writeln!(f, "{name}: {g}")?;
            }
        }
        Ok(())
    }
}

/// Builds generators of 𝒞 for `shape` and checks each commutes with `alpha`.
pub fn build_centralizer(shape: &FocusedShape, alpha: &AlphaImage) -> Result<CentralizerDescription> {
    let (l, m, k) = (shape.l, shape.m, shape.k);
    let w = k - 1;
    let ones_l = vec![1; l];
    let ones_s = vec![1; m - l];
    let on_w = |a: &IntMatrix| embed(shape, a, &ones_l, &ones_s);
    let constrained = l.min(w);

    let mut lambda_part = Vec::new();
    for a in 0..constrained {
        for b in 0..constrained {
            if a != b {
                lambda_part.push(on_w(&IntMatrix::elementary(w, a, b, 2))?);
            }
        }
    }
    for a in 0..constrained {
        let mut d = vec![1; w];
        d[a] = -1;
        lambda_part.push(on_w(&IntMatrix::diagonal(&d))?);
    }

    let mut sign_part = Vec::new();
    for i in 0..l {
        let mut lambda = ones_l.clone();
        lambda[i] = -1;
        let mut d = vec![1; w];
        if i < w {
            d[i] = -1;
        }
        sign_part.push(embed(shape, &IntMatrix::diagonal(&d), &lambda, &ones_s)?);
    }

    let diag_part = (0..m - l)
        .map(|j| {
            let mut mu = ones_s.clone();
            mu[j] = -1;
            embed(shape, &IntMatrix::identity(w), &ones_l, &mu)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut coupling_part = Vec::new();
    for a in constrained..w {
        for b in 0..constrained {
            coupling_part.push(on_w(&IntMatrix::elementary(w, a, b, 2))?);
        }
    }

    let mut gl_part = Vec::new();
    for b in constrained..w {
        for a in 0..w {
            if a != b {
                gl_part.push(on_w(&IntMatrix::elementary(w, a, b, 1))?);
            }
        }
    }
    for a in constrained..w {
        let mut d = vec![1; w];
        d[a] = -1;
        gl_part.push(on_w(&IntMatrix::diagonal(&d))?);
    }
    if w - constrained >= 3 {
        let mut p = IntMatrix::identity(w);
        let free: Vec<usize> = (constrained..w).collect();
        for (idx, &a) in free.iter().enumerate() {
            p.set(a, a, 0);
            p.set(free[(idx + 1) % free.len()], a, 1);
        }
        gl_part.push(on_w(&p)?);
    }

    let description = CentralizerDescription {
        shape: *shape,
        lambda_part,
        sign_part,
        diag_part,
        coupling_part,
        gl_part,
    };
    for g in description.all() {
        if let Some(bad) = alpha.generators.iter().find(|a| !g.commutes_with(a)) {
            return Err(Error::Verification(format!(
                "generator {g} does not commute with α generator {bad}"
            )));
        }
    }
    Ok(description)
}

/// `(pivot, coefficient, [(free variable, coefficient)])`.
type Relation = (usize, i64, Vec<(usize, i64)>);

/// Integer row reduction of a homogeneous system; returns, for each pivot
/// variable, its row `(pivot, coefficient, [(free variable, coefficient)])`
/// meaning `coefficient·x_pivot + Σ c·x_free = 0`, plus the free variables.
fn solve_homogeneous(mut rows: Vec<Vec<i64>>, vars: usize) -> (Vec<Relation>, Vec<usize>) {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let normalize = |row: &mut Vec<i64>| {
        let g = row.iter().fold(0, |g, &x| gcd(g, x));
        if g > 1 {
            row.iter_mut().for_each(|x| *x /= g);
        }
    };
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
    let mut next_row = 0;
    for col in 0..vars {
        let Some(p) = (next_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next_row, p);
        for r in 0..rows.len() {
            if r != next_row && rows[r][col] != 0 {
                let (a, b) = (rows[next_row][col], rows[r][col]);
                let g = gcd(a, b);
                let (fa, fb) = (a / g, b / g);
                let pivot_row = rows[next_row].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = *x * fa - y * fb;
                }
                normalize(&mut rows[r]);
            }
        }
        normalize(&mut rows[next_row]);
        pivots.push((next_row, col));
        next_row += 1;
    }
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..vars).filter(|c| !pivot_cols.contains(c)).collect();
    let relations = pivots
        .into_iter()
        .map(|(r, c)| {
            let deps = free
                .iter()
                .filter(|&&f| rows[r][f] != 0)
                .map(|&f| (f, rows[r][f]))
                .collect();
            (c, rows[r][c], deps)
        })
        .collect();
    (relations, free)
}

/// All unimodular matrices with entries in [−bound, bound] commuting with
/// every generator in `generators`, sorted.
///
/// The commutation equations are solved over Z first; the search then runs
/// over the free coordinates only, checking each determined entry for
/// integrality and range as soon as its inputs are fixed. `work_limit`
/// bounds the number of search nodes.
pub fn centralizer_bruteforce(
    generators: &[IntMatrix],
    dim: usize,
    bound: i64,
    work_limit: u64,
) -> Result<Vec<IntMatrix>> {
    let vars = dim * dim;
    let var = |r: usize, c: usize| r * dim + c;
    let mut rows = Vec::new();
    for g in generators {
        for r in 0..dim {
            for s in 0..dim {
                // (MG − GM)_{rs}
                let mut row = vec![0i64; vars];
                for t in 0..dim {
                    row[var(r, t)] += g.get(t, s);
                    row[var(t, s)] -= g.get(r, t);
                }
                rows.push(row);
            }
        }
    }
    let (relations, free) = solve_homogeneous(rows, vars);
    let free_index: Vec<Option<usize>> = {
        let mut idx = vec![None; vars];
        for (i, &f) in free.iter().enumerate() {
            idx[f] = Some(i);
        }
        idx
    };
    // relations become checkable once their last free input is assigned
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); free.len() + 1];
    for (ri, (_, _, deps)) in relations.iter().enumerate() {
        let last = deps.iter().map(|&(f, _)| free_index[f].unwrap() + 1).max().unwrap_or(0);
        checks[last].push(ri);
    }

    struct Search<'a> {
        relations: &'a [Relation],
        free: &'a [usize],
        checks: &'a [Vec<usize>],
        values: Vec<i64>,
        bound: i64,
        dim: usize,
        nodes: u64,
        limit: u64,
        found: Vec<IntMatrix>,
    }

    impl Search<'_> {
        fn settle(&mut self, level: usize) -> bool {
            for &ri in &self.checks[level] {
                let (pivot, coeff, deps) = &self.relations[ri];
                let sum: i64 = deps.iter().map(|&(f, c)| c * self.values[f]).sum();
                if sum % coeff != 0 {
                    return false;
                }
                let x = -sum / coeff;
                if x.abs() > self.bound {
                    return false;
                }
                self.values[*pivot] = x;
            }
            true
        }

        fn run(&mut self, level: usize) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(Error::WorkLimit {
                    limit: self.limit,
                    what: "centralizer brute force".into(),
                });
            }
            if !self.settle(level) {
                return Ok(());
            }
            if level == self.free.len() {
                let m = IntMatrix::from_entries(self.dim, self.values.clone()).expect("square");
                if m.det().abs() == 1 {
                    self.found.push(m);
                }
                return Ok(());
            }
            let f = self.free[level];
            for x in -self.bound..=self.bound {
                self.values[f] = x;
                self.run(level + 1)?;
            }
            Ok(())
        }
    }

    let mut search = Search {
        relations: &relations,
        free: &free,
        checks: &checks,
        values: vec![0; vars],
        bound,
        dim,
        nodes: 0,
        limit: work_limit,
        found: Vec::new(),
    };
    search.run(0)?;
    let mut found = search.found;
    found.sort();
    Ok(found)
}

/// Whether an element of the centralizer is the image of an inner
/// automorphism, i.e. lies in the finite group α(I_Γ).
pub fn is_alpha_inner(m: &IntMatrix, alpha: &AlphaImage) -> Result<bool> {
    if let Some(g) = alpha.generators.iter().find(|g| !m.commutes_with(g)) {
        return Err(Error::Input(format!("{m} does not centralize α (fails against {g})")));
    }
    Ok(alpha.contains(m))
}

/// Elements w·s with w a product of at most `depth` word generators (or
/// their inverses) and s in the sign subgroup, restricted to entries in
/// [−bound, bound]. Sorted.
pub fn group_ball(description: &CentralizerDescription, depth: usize, bound: i64) -> Result<Vec<IntMatrix>> {
    let dim = description.shape.dim();
    let mut letters = Vec::new();
    for g in description.word_generators() {
        letters.push(g.inverse_unimodular()?);
        letters.push(g);
    }
    let mut seen: BTreeSet<IntMatrix> = BTreeSet::from([IntMatrix::identity(dim)]);
    let mut frontier = vec![IntMatrix::identity(dim)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &letters {
                let y = x * g;
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let signs = description.sign_subgroup();
    let mut ball = BTreeSet::new();
    for x in &seen {
        for s in &signs {
            let y = x * s;
            if y.max_abs_entry() <= bound {
                ball.insert(y);
            }
        }
    }
    Ok(ball.into_iter().collect())
}

/// Outcome of the infinitude witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub matrix: IntMatrix,
    pub t_max: u32,
    pub failure: Option<String>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn line(&self) -> String {
        match &self.failure {
            None => format!("CBAR_WITNESS PASS t_max={}", self.t_max),
            Some(why) => format!("CBAR_WITNESS FAIL {why}"),
        }
    }
}

/// Checks that M, M², …, M^{t_max} are pairwise distinct and none lies in α(I_Γ).
pub fn powers_witness(m: &IntMatrix, alpha: &AlphaImage, t_max: u32) -> Result<WitnessReport> {
    let mut seen: Vec<IntMatrix> = Vec::new();
    let mut power = IntMatrix::identity(m.dim());
    let mut failure = None;
    for t in 1..=t_max {
        power = &power * m;
        if is_alpha_inner(&power, alpha)? {
            failure = Some(format!("M^{t} lies in the alpha image"));
            break;
        }
        if let Some(s) = seen.iter().position(|x| *x == power) {
            failure = Some(format!("M^{t} = M^{}", s + 1));
            break;
        }
        seen.push(power.clone());
    }
    Ok(WitnessReport {
        matrix: m.clone(),
        t_max,
        failure,
    })
}

/// A shear on W embedded in 𝒞: I + E_{1,k−1} when χ̄_{k−1} is unconstrained,
/// otherwise the level 2 shear I + 2E_{12}.
pub fn witness_shear(shape: &FocusedShape) -> Result<IntMatrix> {
    if shape.k < 3 {
        return Err(Error::Capability(format!(
            "the infinitude witness needs k >= 3 (got k = {})",
            shape.k
        )));
    }
    let w = shape.k - 1;
    let a = if w > shape.l {
        IntMatrix::elementary(w, 0, w - 1, 1)
    } else {
        IntMatrix::elementary(w, 0, 1, 2)
    };
    embed(shape, &a, &vec![1; shape.l], &vec![1; shape.m - shape.l])
}

/// Powers of an embedded shear are pairwise distinct and never inner.
pub fn cbar_infinite_witness(shape: &FocusedShape, alpha: &AlphaImage, t_max: u32) -> Result<WitnessReport> {
    powers_witness(&witness_shear(shape)?, alpha, t_max)
}
