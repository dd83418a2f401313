//! Reduced density matrices and the PPT entanglement check.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Statevector;

/// A reduced density matrix over `m` retained qubits.
///
/// Row/column index bit `j` holds the basis value of the `j`-th qubit of the
/// `keep` list that produced the matrix (position order, not original qubit
/// numbering).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn qubit_count(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diagonal().sum()
    }

    /// tr(rho^2); 1 for a pure state.
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).diagonal().sum().re
    }

    /// Largest |rho[i][j] - conj(rho[j][i])|.
    pub fn hermiticity_error(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                max = max.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        max
    }

    /// Eigenvalues in ascending order (the matrix is Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    /// Eigenpairs with eigenvalues above `threshold`, descending by value.
    pub fn dominant_eigenpairs(&self, threshold: f64) -> Vec<(f64, Vec<Complex64>)> {
        let eigen = self.entries.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<Complex64>)> = eigen
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &value)| value > threshold)
            .map(|(idx, &value)| (value, eigen.eigenvectors.column(idx).iter().copied().collect()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Trace out every qubit not in `keep`.
///
/// `keep` must be nonempty with distinct in-range entries; its order decides
/// the bit layout of the reduced matrix.
pub fn partial_trace(s: &Statevector, keep: &[usize]) -> DensityMatrix {
    let n = s.qubit_count();
    assert!(!keep.is_empty(), "partial_trace needs at least one kept qubit");
    let mut seen = vec![false; n];
    for &q in keep {
        assert!(q < n, "qubit {q} out of range");
        assert!(!seen[q], "qubit {q} listed twice");
        seen[q] = true;
    }

    let m = keep.len();
    let env: Vec<usize> = (0..n).filter(|q| !seen[*q]).collect();
    let dim = 1usize << m;

    // Group amplitudes by environment configuration, then accumulate one
    // outer product per configuration.
    let mut grouped = vec![vec![Complex64::ZERO; dim]; 1 << env.len()];
    for (idx, &amp) in s.amplitudes().iter().enumerate() {
        let mut a = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            a |= ((idx >> q) & 1) << pos;
        }
        let mut e = 0usize;
        for (pos, &q) in env.iter().enumerate() {
            e |= ((idx >> q) & 1) << pos;
        }
        grouped[e][a] = amp;
    }

    let mut entries = DMatrix::<Complex64>::zeros(dim, dim);
    for block in &grouped {
        for row in 0..dim {
            if block[row] == Complex64::ZERO {
                continue;
            }
            for col in 0..dim {
                entries[(row, col)] += block[row] * block[col].conj();
            }
        }
    }

    DensityMatrix { m, entries }
}

/// PPT negativity: the absolute sum of the negative eigenvalues of the
/// partial transpose over the qubits at the given positions of the kept
/// order. Zero for separable states across that split; positive values
/// certify entanglement.
///
/// `transposed` must be a nonempty proper subset of `0..m`.
pub fn ppt_negativity(rho: &DensityMatrix, transposed: &[usize]) -> f64 {
    let m = rho.qubit_count();
    assert!(!transposed.is_empty(), "split must transpose at least one qubit");
    assert!(transposed.len() < m, "split must leave at least one qubit untransposed");
    let mut mask = 0usize;
    for &pos in transposed {
        assert!(pos < m, "split position {pos} out of range");
        assert_eq!(mask & (1 << pos), 0, "split position {pos} listed twice");
        mask |= 1 << pos;
    }

    let dim = rho.dim();
    let pt = DMatrix::<Complex64>::from_fn(dim, dim, |row, col| {
        let swapped_row = (row & !mask) | (col & mask);
        let swapped_col = (col & !mask) | (row & mask);
        rho.entries[(swapped_row, swapped_col)]
    });

    hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&v| v < 0.0)
        .map(f64::abs)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_fixture, Circuit};
    use crate::oracle::simulate;

    #[test]
    fn ghz_reduced_state_is_the_diagonal_mixture() {
        let s = simulate(&build_fixture("ghz").unwrap()).unwrap();
        let rho = partial_trace(&s, &[0, 1]);
        assert_eq!(rho.qubit_count(), 2);
        assert!((rho.trace() - Complex64::ONE).norm() < 1e-10);
        assert!(rho.hermiticity_error() < 1e-10);
        for row in 0..4 {
            for col in 0..4 {
                let expect = if (row, col) == (0, 0) || (row, col) == (3, 3) { 0.5 } else { 0.0 };
                assert!((rho.entry(row, col) - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn product_state_reduces_to_a_pure_state() {
        let c = Circuit::builder(3)
            .u3(0, 0.7, 0.2, 0.9)
            .u3(1, 1.3, 0.5, 0.1)
            .u3(2, 0.4, 1.1, 0.6)
            .build();
        let s = simulate(&c).unwrap();
        for keep in [vec![0], vec![1, 2], vec![2, 0]] {
            let rho = partial_trace(&s, &keep);
            assert!((rho.purity() - 1.0).abs() < 1e-10, "keep {keep:?}");
        }
    }

    #[test]
    fn separable_diagonal_mixture_has_zero_negativity() {
        let s = simulate(&build_fixture("ghz").unwrap()).unwrap();
        let rho = partial_trace(&s, &[0, 1]);
        let neg = ppt_negativity(&rho, &[1]);
        assert!(neg < 1e-10, "negativity {neg}");
    }

    #[test]
    fn bell_state_negativity_is_one_half() {
        let c = Circuit::builder(2)
            .u3(0, std::f64::consts::FRAC_PI_2, 0.0, 0.0)
            .cx(0, 1)
            .build();
        let s = simulate(&c).unwrap();
        let rho = partial_trace(&s, &[0, 1]);
        let neg = ppt_negativity(&rho, &[0]);
        assert!((neg - 0.5).abs() < 1e-10, "negativity {neg}");
        // Transposing the other side gives the same value.
        assert!((ppt_negativity(&rho, &[1]) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn reduced_states_are_positive_semidefinite() {
        let s = simulate(&build_fixture("w_state").unwrap()).unwrap();
        for keep in [vec![0, 1], vec![1, 2], vec![0, 2]] {
            let rho = partial_trace(&s, &keep);
            let min = rho.eigenvalues()[0];
            assert!(min > -1e-9, "keep {keep:?}: min eigenvalue {min}");
        }
    }

    #[test]
    fn fig2_outer_pair_is_correlated_but_separable() {
        // The outer qubits end up measurement-independent, and their
        // reduced pair state is PPT (separable) at every parameter draw:
        // tracing the middle qubit leaves an X-state sitting exactly on
        // the partial-transpose boundary. The entanglement is with the
        // middle qubit, as the neighbouring pair shows.
        let c = build_fixture("fig2").unwrap();
        let cfg = crate::oracle::ProbeConfig::default();
        let mut max_outer = 0.0f64;
        let mut max_adjacent = 0.0f64;
        for assignment in crate::oracle::sample_assignments(&c, &cfg) {
            let s = simulate(&assignment.apply(&c)).unwrap();
            max_outer = max_outer.max(ppt_negativity(&partial_trace(&s, &[0, 2]), &[1]));
            max_adjacent = max_adjacent.max(ppt_negativity(&partial_trace(&s, &[0, 1]), &[1]));
        }
        assert!(max_outer < 1e-10, "outer pair negativity {max_outer}");
        assert!(max_adjacent > 1e-3, "adjacent pair negativity {max_adjacent}");
    }

    #[test]
    #[should_panic(expected = "at least one kept qubit")]
    fn empty_keep_is_rejected() {
        let s = simulate(&build_fixture("ghz").unwrap()).unwrap();
        let _ = partial_trace(&s, &[]);
    }

    #[test]
    #[should_panic(expected = "at least one qubit untransposed")]
    fn trivial_split_is_rejected() {
        let s = simulate(&build_fixture("ghz").unwrap()).unwrap();
        let rho = partial_trace(&s, &[0, 1]);
        let _ = ppt_negativity(&rho, &[0, 1]);
    }
}
