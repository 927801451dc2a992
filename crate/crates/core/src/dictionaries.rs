//! Dictionaries of unit vectors, their coherence in the Euclidean and Banach
//! sense, and greedy construction of maximal μ-coherent dictionaries.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{dot, signum0, Scalar};
use crate::spaces::{norming_coords, split_seed, sphere_stream, LpSpace};

/// Default number of consecutive rejections that ends greedy construction.
pub const DEFAULT_SATURATION_TRIALS: usize = 2000;

/// Two candidates closer than this are treated as the same vector.
const DUPLICATE_DISTANCE: f64 = 1e-9;

fn unit_tolerance<T: Scalar>() -> T {
    T::lit(1e-12).max(T::unit_tolerance())
}

/// An ordered list of unit vectors `g¹, …, g^N` in an ℓ_p space.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Dictionary<T> {
    space: LpSpace<T>,
    vectors: Vec<Vec<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    admission_trials: Option<u64>,
}

impl<T: Scalar> Dictionary<T> {
    /// Checks dimensions, unit norms and pairwise distinctness.
    pub fn new(space: LpSpace<T>, vectors: Vec<Vec<T>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidParameter("a dictionary needs at least one vector".into()));
        }
        let tol = unit_tolerance::<T>();
        for (index, v) in vectors.iter().enumerate() {
            space.check_dim(v)?;
            let norm = space.norm_of(v);
            if (norm - T::one()).abs() > tol {
                return Err(Error::NotNormalized { index, norm: norm.as_f64() });
            }
        }
        let dup = T::lit(DUPLICATE_DISTANCE);
        for i in 0..vectors.len() {
            for j in 0..i {
                if space.distance_of(&vectors[i], &vectors[j]) < dup {
                    return Err(Error::InvalidParameter(format!("vectors {j} and {i} coincide")));
                }
            }
        }
        Ok(Self { space, vectors, admission_trials: None })
    }

    pub fn space(&self) -> &LpSpace<T> {
        &self.space
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Candidates drawn by the greedy builder, when this dictionary came from it.
    pub fn admission_trials(&self) -> Option<u64> {
        self.admission_trials
    }

    /// Norming functionals `w^j` of every element (the dual dictionary).
    pub fn dual_vectors(&self) -> Result<Vec<Vec<T>>> {
        let p = self.space.smooth_exponent()?;
        Ok(self.vectors.iter().map(|g| norming_coords(g, p, self.space.norm_of(g))).collect())
    }

    pub(crate) fn push_unchecked(&mut self, v: Vec<T>) {
        self.vectors.push(v);
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Dictionary<T> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound = "T: Scalar")]
        struct Raw<T> {
            space: LpSpace<T>,
            vectors: Vec<Vec<T>>,
            #[serde(default)]
            admission_trials: Option<u64>,
        }
        let raw = Raw::<T>::deserialize(de)?;
        let mut dict = Dictionary::new(raw.space, raw.vectors).map_err(serde::de::Error::custom)?;
        dict.admission_trials = raw.admission_trials;
        Ok(dict)
    }
}

fn require_pairs<T>(d: &Dictionary<T>) -> Result<()> {
    if d.vectors.len() < 2 {
        Err(Error::InvalidParameter("coherence needs at least two vectors".into()))
    } else {
        Ok(())
    }
}

/// `M(D) = max_{k≠l} |⟨g^k, g^l⟩|` for a dictionary in ℓ₂.
pub fn coherence_euclidean<T: Scalar>(dict: &Dictionary<T>) -> Result<T> {
    if !dict.space.is_euclidean() {
        return Err(Error::UnsupportedExponent(format!(
            "{} (Euclidean coherence needs p = 2)",
            dict.space.exponent()
        )));
    }
    require_pairs(dict)?;
    let v = &dict.vectors;
    let mut worst = T::zero();
    for i in 0..v.len() {
        for j in 0..i {
            worst = worst.max(dot(&v[i], &v[j]).abs());
        }
    }
    Ok(worst)
}

/// `M(D, X) = max_{g≠h} |F_g(h)|` over ordered pairs, using the unique ℓ_p
/// norming functionals (`1 < p < ∞`).
pub fn coherence_banach<T: Scalar>(dict: &Dictionary<T>) -> Result<T> {
    require_pairs(dict)?;
    let w = dict.dual_vectors()?;
    let g = &dict.vectors;
    let mut worst = T::zero();
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j {
                worst = worst.max(dot(&w[i], &g[j]).abs());
            }
        }
    }
    Ok(worst)
}

/// Coherence in the sense appropriate to the dictionary's space.
pub fn coherence<T: Scalar>(dict: &Dictionary<T>) -> Result<T> {
    if dict.space.is_euclidean() {
        coherence_euclidean(dict)
    } else {
        coherence_banach(dict)
    }
}

/// `C(D) = WᵀΦ`, `c_{ij} = F_{g^i}(g^j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> CoherenceMatrix<T> {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    /// Singular values in decreasing order (computed in `f64`).
    pub fn singular_values(&self) -> Vec<f64> {
        let m = DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).as_f64());
        let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn numeric_rank(&self, rel_tol: f64) -> usize {
        let s = self.singular_values();
        let cutoff = s.first().copied().unwrap_or(0.0) * rel_tol;
        s.iter().filter(|&&v| v > cutoff).count()
    }

    pub fn max_diagonal_deviation(&self) -> T {
        (0..self.n).map(|i| (self.get(i, i) - T::one()).abs()).fold(T::zero(), T::max)
    }

    pub fn max_off_diagonal(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    worst = worst.max(self.get(i, j).abs());
                }
            }
        }
        worst
    }
}

pub fn coherence_matrix<T: Scalar>(dict: &Dictionary<T>) -> Result<CoherenceMatrix<T>> {
    require_pairs(dict)?;
    let w = dict.dual_vectors()?;
    let g = &dict.vectors;
    let n = g.len();
    let mut entries = Vec::with_capacity(n * n);
    for wi in &w {
        entries.extend(g.iter().map(|gj| dot(wi, gj)));
    }
    Ok(CoherenceMatrix { n, entries })
}

/// Incremental admission state shared by the greedy builder and the
/// maximality certifier: the dictionary plus its cached dual vectors.
pub(crate) struct Admitter<T> {
    pub(crate) dict: Dictionary<T>,
    duals: Vec<Vec<T>>,
    mu: T,
    p: T,
}

impl<T: Scalar> Admitter<T> {
    pub(crate) fn new(dict: Dictionary<T>, mu: T) -> Result<Self> {
        let duals = dict.dual_vectors()?;
        let p = dict.space.smooth_exponent()?;
        Ok(Self { dict, duals, mu, p })
    }

    fn empty(space: LpSpace<T>, mu: T) -> Result<Self> {
        let p = space.smooth_exponent()?;
        Ok(Self { dict: Dictionary { space, vectors: Vec::new(), admission_trials: None }, duals: Vec::new(), mu, p })
    }

    fn euclidean(&self) -> bool {
        self.p == T::lit(2.0)
    }

    /// Norming functional of a unit vector `x`.
    pub(crate) fn functional_of(&self, x: &[T]) -> Vec<T> {
        if self.euclidean() {
            x.to_vec()
        } else {
            norming_coords(x, self.p, T::one())
        }
    }

    /// `max_g |F_x(g)|`; `x` is a covered direction iff this exceeds `μ`.
    pub(crate) fn max_functional(&self, fx: &[T]) -> T {
        self.dict.vectors.iter().map(|g| dot(fx, g).abs()).fold(T::zero(), T::max)
    }

    /// Two-sided test: `|F_x(g)| ≤ μ` and `|F_g(x)| ≤ μ` for every `g`, and
    /// `x` is not a near-duplicate.
    pub(crate) fn admissible(&self, x: &[T], fx: &[T]) -> bool {
        let dup = T::lit(DUPLICATE_DISTANCE);
        let two_sided = !self.euclidean();
        self.dict.vectors.iter().zip(&self.duals).all(|(g, w)| {
            dot(fx, g).abs() <= self.mu
                && (!two_sided || dot(w, x).abs() <= self.mu)
                && self.dict.space.distance_of(x, g) >= dup
        })
    }

    pub(crate) fn admit(&mut self, mut x: Vec<T>, mut fx: Vec<T>) {
        if x.iter().find(|v| **v != T::zero()).is_some_and(|v| *v < T::zero()) {
            x.iter_mut().for_each(|v| *v = -*v);
            fx.iter_mut().for_each(|v| *v = -*v);
        }
        self.dict.push_unchecked(x);
        self.duals.push(fx);
    }
}

/// Greedy maximal dictionary with coherence at most `mu`.
///
/// Uniform sphere samples are proposed one at a time and admitted when the
/// coherence bound survives; construction stops after `saturation_trials`
/// consecutive rejections. Saturation is a stopping heuristic, not a proof of
/// maximality. Admitted vectors are oriented with a positive leading
/// coordinate.
pub fn greedy_maximal_dictionary<T: Scalar>(
    space: &LpSpace<T>,
    mu: T,
    seed: u64,
    saturation_trials: usize,
) -> Result<Dictionary<T>> {
    if !(mu > T::zero() && mu < T::one()) {
        return Err(Error::InvalidParameter(format!("mu must lie in (0, 1), got {mu}")));
    }
    if saturation_trials == 0 {
        return Err(Error::InvalidParameter("saturation_trials must be positive".into()));
    }
    let mut state = Admitter::empty(*space, mu)?;
    let mut trials = 0u64;
    let mut rejected = 0usize;
    for x in sphere_stream(space, seed) {
        trials += 1;
        let fx = state.functional_of(&x);
        if state.admissible(&x, &fx) {
            state.admit(x, fx);
            rejected = 0;
        } else {
            rejected += 1;
            if rejected >= saturation_trials {
                break;
            }
        }
    }
    let mut dict = state.dict;
    dict.admission_trials = Some(trials);
    Ok(dict)
}

/// Budget for [`complete_dictionary`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletionBudget {
    /// Sphere samples kept as the reference set on which gaps are counted.
    pub reference_samples: usize,
    /// Consecutive hole descents without a gap that end the search.
    pub patience: usize,
    /// Subgradient steps per descent.
    pub steps: usize,
    /// Hard cap on descents.
    pub max_descents: usize,
}

impl Default for CompletionBudget {
    fn default() -> Self {
        Self { reference_samples: 20_000, patience: 300, steps: 300, max_descents: 20_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Completion<T> {
    pub dictionary: Dictionary<T>,
    /// Gap directions admitted directly.
    pub admitted: usize,
    /// Gap directions admitted after removing the elements blocking them.
    pub swaps: usize,
    pub descents: usize,
    /// Gap directions found that no accepted move could cover.
    pub stuck: usize,
    /// No gap on the reference set and `patience` fruitless descents at the end.
    pub complete: bool,
}

/// A unit direction with its norming functional.
struct Probe<T> {
    x: Vec<T>,
    fx: Vec<T>,
}

impl<T: Scalar> Admitter<T> {
    fn is_gap(&self, fx: &[T]) -> bool {
        self.max_functional(fx) <= self.mu
    }

    fn gap_count(&self, probes: &[Probe<T>]) -> usize {
        probes.iter().filter(|pr| self.is_gap(&pr.fx)).count()
    }

    /// The state with the elements blocking `x` removed and `x` admitted.
    fn swapped(&self, x: &[T], fx: &[T]) -> Self {
        let mut next = Self {
            dict: Dictionary { space: self.dict.space, vectors: Vec::new(), admission_trials: None },
            duals: Vec::new(),
            mu: self.mu,
            p: self.p,
        };
        let dup = T::lit(DUPLICATE_DISTANCE);
        for (g, w) in self.dict.vectors.iter().zip(&self.duals) {
            let clear = dot(fx, g).abs() <= self.mu
                && dot(w, x).abs() <= self.mu
                && self.dict.space.distance_of(x, g) >= dup;
            if clear {
                next.dict.vectors.push(g.clone());
                next.duals.push(w.clone());
            }
        }
        next.admit(x.to_vec(), fx.to_vec());
        next
    }

    /// Covers the gap `probe`, either by admitting it or by a swap that
    /// strictly lowers the gap count on `probes`. Returns whether a swap was
    /// used, or `None` when neither move applies.
    fn repair(&mut self, probe: &Probe<T>, probes: &[Probe<T>]) -> Option<bool> {
        if self.admissible(&probe.x, &probe.fx) {
            self.admit(probe.x.clone(), probe.fx.clone());
            return Some(false);
        }
        let mut next = self.swapped(&probe.x, &probe.fx);
        for pr in probes {
            if next.is_gap(&pr.fx) && next.admissible(&pr.x, &pr.fx) {
                next.admit(pr.x.clone(), pr.fx.clone());
            }
        }
        if next.gap_count(probes) < self.gap_count(probes) {
            *self = next;
            Some(true)
        } else {
            None
        }
    }

    /// Subgradient descent of `h(w) = max_g |⟨w, g⟩|` over the unit sphere of
    /// the dual space; returns the best `w` and `h(w)`.
    fn descend(&self, dual: &LpSpace<T>, mut w: Vec<T>, steps: usize) -> (Vec<T>, T) {
        let mut best = (w.clone(), T::infinity());
        for t in 1..=steps {
            let (k, h) = self
                .dict
                .vectors
                .iter()
                .map(|g| dot(&w, g))
                .enumerate()
                .fold((0, T::zero()), |acc, (i, v)| if v.abs() > acc.1.abs() { (i, v) } else { acc });
            if h.abs() < best.1 {
                best = (w.clone(), h.abs());
            }
            let eta = T::lit(0.1) / T::lit(t as f64).sqrt();
            let s = signum0(h);
            for (wi, gi) in w.iter_mut().zip(&self.dict.vectors[k]) {
                *wi = *wi - eta * s * *gi;
            }
            dual.normalize(&mut w);
        }
        best
    }
}

/// Repairs reference gaps until a full pass changes nothing; returns the
/// numbers of direct admissions and swaps.
fn sweep<T: Scalar>(state: &mut Admitter<T>, probes: &[Probe<T>]) -> (usize, usize) {
    let (mut admitted, mut swaps) = (0, 0);
    loop {
        let mut changed = false;
        for pr in probes {
            if state.is_gap(&pr.fx) {
                match state.repair(pr, probes) {
                    Some(true) => swaps += 1,
                    Some(false) => admitted += 1,
                    None => continue,
                }
                changed = true;
            }
        }
        if !changed {
            return (admitted, swaps);
        }
    }
}

/// Completes a dictionary towards the one-sided maximality that coverage
/// needs: every unit `x` has some `g` with `|F_x(g)| > μ`.
///
/// Gaps are sought on a reference sample and by descent on
/// `max_g |F_x(g)|`, which is linear in `F_x` and so is minimized over the
/// dual sphere. In ℓ₂ every gap is admissible. Elsewhere a gap may be
/// blocked by `|F_g(x)| > μ`; it is then swapped in for its blockers only if
/// that lowers the number of reference gaps, so coherence stays at most `μ`
/// and the search terminates.
pub fn complete_dictionary<T: Scalar>(
    dict: Dictionary<T>,
    mu: T,
    budget: &CompletionBudget,
    seed: u64,
) -> Result<Completion<T>> {
    if !(mu > T::zero() && mu < T::one()) {
        return Err(Error::InvalidParameter(format!("mu must lie in (0, 1), got {mu}")));
    }
    if budget.reference_samples == 0 || budget.patience == 0 || budget.steps == 0 {
        return Err(Error::InvalidParameter("completion budget entries must be positive".into()));
    }
    let space = *dict.space();
    let mut state = Admitter::new(dict, mu)?;
    let mut probes: Vec<Probe<T>> = sphere_stream(&space, split_seed(seed, 6))
        .take(budget.reference_samples)
        .map(|x| {
            let fx = state.functional_of(&x);
            Probe { x, fx }
        })
        .collect();
    let (mut admitted, mut swaps) = sweep(&mut state, &probes);
    let mut stuck = 0;
    let dual = space.dual_space()?;

    let mut starts = sphere_stream(&space, split_seed(seed, 7));
    let (mut descents, mut fruitless) = (0, 0);
    while fruitless < budget.patience && descents < budget.max_descents {
        descents += 1;
        let start = starts.next().expect("sphere stream is infinite");
        let (w, h) = state.descend(&dual, state.functional_of(&start), budget.steps);
        if h > mu {
            fruitless += 1;
            continue;
        }
        let mut x = if state.euclidean() { w } else { norming_coords(&w, state.p / (state.p - T::one()), T::one()) };
        space.normalize(&mut x);
        let fx = state.functional_of(&x);
        if !state.is_gap(&fx) {
            fruitless += 1;
            continue;
        }
        fruitless = 0;
        let probe = Probe { x, fx };
        let swapped = state.repair(&probe, &probes);
        probes.push(probe);
        match swapped {
            Some(true) => {
                // A swap can uncover reference directions.
                swaps += 1;
                let (a, s) = sweep(&mut state, &probes);
                admitted += a;
                swaps += s;
            }
            Some(false) => admitted += 1,
            None => stuck += 1,
        }
    }
    let complete = fruitless >= budget.patience && state.gap_count(&probes) == 0;
    Ok(Completion { dictionary: state.dict, admitted, swaps, descents, stuck, complete })
}

/// [`greedy_maximal_dictionary`] followed by [`complete_dictionary`].
pub fn maximal_dictionary<T: Scalar>(
    space: &LpSpace<T>,
    mu: T,
    seed: u64,
    saturation_trials: usize,
    budget: &CompletionBudget,
) -> Result<Completion<T>> {
    let dict = greedy_maximal_dictionary(space, mu, seed, saturation_trials)?;
    let trials = dict.admission_trials;
    let mut done = complete_dictionary(dict, mu, budget, seed)?;
    done.dictionary.admission_trials = trials;
    Ok(done)
}
