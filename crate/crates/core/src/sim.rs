//! Dense statevector check that a flow yields a unitary embedding.
//!
//! Every non-input qubit starts in `|+⟩`, a controlled-Z acts on every edge,
//! and each measured qubit `v` is projected onto
//! `|+_θ⟩ ∝ |0⟩ + e^{iθ_v}|1⟩`. Keeping only that branch replaces the
//! corrections, so the resulting map from inputs to outputs should be
//! proportional to an isometry whenever the geometry has a flow.
//!
//! Qubit `q` of the live register is the `q`-th live vertex in ascending id
//! order; input and output basis indices use the same convention over the
//! sorted input and output sets.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::flow::CausalFlow;
use crate::graph::{Geometry, Vertex};

pub const DEFAULT_SIMULATION_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("angle missing for measured vertex {0}")]
    MissingAngle(Vertex),
    #[error("angle given for unmeasured vertex {0}")]
    UnexpectedAngle(Vertex),
    #[error("angle for vertex {0} is not finite")]
    NonFiniteAngle(Vertex),
    #[error("flow does not match the geometry")]
    FlowMismatch,
    #[error("schedule must list every measured vertex exactly once")]
    BadSchedule,
    #[error("{qubits} qubits exceed the simulation bound of {bound}")]
    TooLarge { qubits: usize, bound: usize },
    #[error("the post-selected map is zero")]
    ZeroMap,
}

/// A geometry with a flow and an XY-plane angle on each measured vertex.
#[derive(Debug, Clone)]
pub struct MeasurementPattern {
    geometry: Geometry,
    flow: CausalFlow,
    angles: BTreeMap<Vertex, f64>,
}

impl MeasurementPattern {
    pub fn new(
        geometry: Geometry,
        flow: CausalFlow,
        angles: BTreeMap<Vertex, f64>,
    ) -> Result<Self, SimError> {
        if flow.ranks().len() != geometry.vertex_count() {
            return Err(SimError::FlowMismatch);
        }
        for (&v, angle) in &angles {
            if v >= geometry.vertex_count() || geometry.is_output(v) {
                return Err(SimError::UnexpectedAngle(v));
            }
            if !angle.is_finite() {
                return Err(SimError::NonFiniteAngle(v));
            }
        }
        if let Some(v) = geometry.non_outputs().find(|v| !angles.contains_key(v)) {
            return Err(SimError::MissingAngle(v));
        }
        Ok(MeasurementPattern {
            geometry,
            flow,
            angles,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn flow(&self) -> &CausalFlow {
        &self.flow
    }

    pub fn angles(&self) -> &BTreeMap<Vertex, f64> {
        &self.angles
    }

    pub fn schedule(&self) -> Vec<Vertex> {
        measurement_order(&self.flow)
    }
}

/// Uniform angles in `[0, 2π)` for every measured vertex.
pub fn random_angles<R: Rng>(geom: &Geometry, rng: &mut R) -> BTreeMap<Vertex, f64> {
    geom.non_outputs()
        .map(|v| (v, rng.gen_range(0.0..TAU)))
        .collect()
}

/// Measured vertices by ascending rank, ties by id.
pub fn measurement_order(flow: &CausalFlow) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = flow.successor().pairs().map(|(x, _)| x).collect();
    order.sort_by_key(|&v| (flow.rank(v), v));
    order
}

/// A dense `rows × cols` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl LinearMap {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        LinearMap { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.norm_sqr() == 0.0)
    }

    /// `V†V`.
    pub fn gram(&self) -> LinearMap {
        let n = self.cols;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..self.rows {
            let row = &self.data[r * n..(r + 1) * n];
            for i in 0..n {
                let a = row[i].conj();
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * row[j];
                }
            }
        }
        LinearMap::from_rows(n, n, out)
    }

    /// `‖ V†V · cols / tr(V†V) − 1 ‖_max`; zero exactly when `V` is a
    /// positive multiple of an isometry.
    pub fn isometry_defect(&self) -> Result<f64, SimError> {
        let gram = self.gram();
        let trace: f64 = (0..self.cols).map(|i| gram.get(i, i).re).sum();
        if trace <= 0.0 || self.is_zero() {
            return Err(SimError::ZeroMap);
        }
        let scale = self.cols as f64 / trace;
        let mut defect: f64 = 0.0;
        for i in 0..self.cols {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((gram.get(i, j) * scale - target).norm());
            }
        }
        Ok(defect)
    }

    /// Largest entrywise distance to `other` after rescaling `other` by the
    /// complex factor that best matches it to `self`.
    pub fn distance_up_to_scalar(&self, other: &LinearMap) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let dot: Complex64 = other
            .data
            .iter()
            .zip(&self.data)
            .map(|(o, s)| o.conj() * s)
            .sum();
        let norm: f64 = other.data.iter().map(|o| o.norm_sqr()).sum();
        let factor = if norm > 0.0 { dot / norm } else { Complex64::new(0.0, 0.0) };
        self.data
            .iter()
            .zip(&other.data)
            .map(|(s, o)| (s - o * factor).norm())
            .fold(0.0, f64::max)
    }

    /// Row-major text, one row per line, entries `re+imi` with 15
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:.14e}{:+.14e}i", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Post-selected map of the pattern, measuring in its flow order.
pub fn simulate_postselected(pattern: &MeasurementPattern, bound: usize) -> Result<LinearMap, SimError> {
    simulate_in_order(pattern, &pattern.schedule(), bound)
}

/// Post-selected map with an explicit measurement order.
pub fn simulate_in_order(
    pattern: &MeasurementPattern,
    order: &[Vertex],
    bound: usize,
) -> Result<LinearMap, SimError> {
    let geom = &pattern.geometry;
    let n = geom.vertex_count();
    if n > bound {
        return Err(SimError::TooLarge { qubits: n, bound });
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if !sorted.iter().copied().eq(geom.non_outputs()) {
        return Err(SimError::BadSchedule);
    }

    let inputs = geom.inputs();
    let cols = 1usize << inputs.len();
    let rows = 1usize << geom.output_count();
    let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
    let signs = cz_signs(geom);
    for col in 0..cols {
        let out = run_column(pattern, order, &signs, col);
        for (row, amp) in out.into_iter().enumerate() {
            data[row * cols + col] = amp;
        }
    }
    Ok(LinearMap::from_rows(rows, cols, data))
}

/// Whether the product of all controlled-Z gates flips the sign of each
/// basis state, i.e. whether the state spans an odd number of edges.
fn cz_signs(geom: &Geometry) -> Vec<bool> {
    let mut odd = vec![false; 1 << geom.vertex_count()];
    for (u, v) in geom.graph().edges() {
        let both = (1 << u) | (1 << v);
        for (s, flag) in odd.iter_mut().enumerate() {
            if s & both == both {
                *flag = !*flag;
            }
        }
    }
    odd
}

/// Output amplitudes for the `col`-th computational basis input.
fn run_column(
    pattern: &MeasurementPattern,
    order: &[Vertex],
    signs: &[bool],
    col: usize,
) -> Vec<Complex64> {
    let geom = &pattern.geometry;
    let n = geom.vertex_count();
    let mut live: Vec<Vertex> = (0..n).collect();

    // |col⟩ on I, |+⟩ elsewhere
    let mut input_mask = 0usize;
    let mut input_bits = 0usize;
    for (q, &v) in geom.inputs().iter().enumerate() {
        input_mask |= 1 << v;
        if col >> q & 1 == 1 {
            input_bits |= 1 << v;
        }
    }
    let amplitude = FRAC_1_SQRT_2.powi((n - geom.inputs().len()) as i32);
    let mut state: Vec<Complex64> = (0..1usize << n)
        .map(|s| match (s & input_mask == input_bits, signs[s]) {
            (false, _) => Complex64::new(0.0, 0.0),
            (true, false) => Complex64::new(amplitude, 0.0),
            (true, true) => Complex64::new(-amplitude, 0.0),
        })
        .collect();

    for &v in order {
        let q = live.binary_search(&v).expect("measured vertex is live");
        let phase = Complex64::from_polar(1.0, -pattern.angles[&v]);
        state = project_plus(&state, q, phase);
        live.remove(q);
    }
    state
}

/// Applies `⟨+_θ|` to qubit `q`, where `phase = e^{-iθ}`, removing it.
fn project_plus(state: &[Complex64], q: usize, phase: Complex64) -> Vec<Complex64> {
    let low = (1usize << q) - 1;
    (0..state.len() / 2)
        .map(|r| {
            let zero = (r & low) | ((r & !low) << 1);
            let one = zero | (1 << q);
            (state[zero] + phase * state[one]) * FRAC_1_SQRT_2
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{find_causal_flow, SearchConfig};
    use crate::graph::Graph;

    fn pattern(geom: Geometry, angles: &[(Vertex, f64)]) -> MeasurementPattern {
        let flow = find_causal_flow(&geom, &SearchConfig::default())
            .flow()
            .cloned()
            .expect("geometry has a flow");
        MeasurementPattern::new(geom, flow, angles.iter().copied().collect()).unwrap()
    }

    #[test]
    fn single_edge_is_hadamard() {
        let geom = Geometry::new(Graph::from_edges(2, [(0, 1)]).unwrap(), [0], [1]).unwrap();
        let v = simulate_postselected(&pattern(geom, &[(0, 0.0)]), 12).unwrap();
        let h = FRAC_1_SQRT_2;
        let hadamard = LinearMap::from_rows(
            2,
            2,
            [h, h, h, -h].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        );
        assert!(v.distance_up_to_scalar(&hadamard) < 1e-12);
        // hand computation gives exactly H / 2
        assert!((v.get(0, 0).re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn nothing_measured_is_identity() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let geom = Geometry::new(Graph::empty(2), [0, 1], [0, 1]).unwrap();
        let v = simulate_postselected(&pattern(geom, &[]), 12).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r == c { 1.0 } else { 0.0 };
                assert!((v.get(r, c) - expected).norm() < 1e-12);
            }
        }
        // an edge between unmeasured qubits is a diagonal unitary
        let geom = Geometry::new(g, [0, 1], [0, 1]).unwrap();
        let v = simulate_postselected(&pattern(geom, &[]), 12).unwrap();
        assert!(v.isometry_defect().unwrap() < 1e-12);
        assert!((v.get(3, 3) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn defect_of_rank_deficient_map() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let v = LinearMap::from_rows(2, 2, vec![one, zero, zero, zero]);
        assert!((v.isometry_defect().unwrap() - 1.0).abs() < 1e-12);
        let z = LinearMap::from_rows(2, 2, vec![zero; 4]);
        assert_eq!(z.isometry_defect(), Err(SimError::ZeroMap));
    }

    #[test]
    fn path_order() {
        let geom =
            Geometry::new(Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap(), [0], [2]).unwrap();
        let p = pattern(geom, &[(0, 0.3), (1, 1.1)]);
        assert_eq!(p.schedule(), vec![0, 1]);
    }

    #[test]
    fn angles_must_cover_measured_vertices() {
        let geom =
            Geometry::new(Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap(), [0], [2]).unwrap();
        let flow = find_causal_flow(&geom, &SearchConfig::default()).flow().cloned().unwrap();
        let missing = MeasurementPattern::new(geom.clone(), flow.clone(), [(0, 0.1)].into());
        assert!(matches!(missing, Err(SimError::MissingAngle(1))));
        let extra =
            MeasurementPattern::new(geom, flow, [(0, 0.1), (1, 0.2), (2, 0.3)].into());
        assert!(matches!(extra, Err(SimError::UnexpectedAngle(2))));
    }

    #[test]
    fn bound_is_enforced() {
        let geom = Geometry::new(Graph::empty(3), [0, 1, 2], [0, 1, 2]).unwrap();
        assert!(matches!(
            simulate_postselected(&pattern(geom, &[]), 2),
            Err(SimError::TooLarge { qubits: 3, bound: 2 })
        ));
    }

    #[test]
    fn text_dump_has_fifteen_digits() {
        let v = LinearMap::from_rows(1, 1, vec![Complex64::new(0.5, -0.25)]);
        assert_eq!(v.to_text(), "5.00000000000000e-1-2.50000000000000e-1i\n");
    }
}
