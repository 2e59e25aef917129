//! Random states and unitaries from caller-supplied generators.
//!
//! Used by the property suites and by the hidden-state grid in dimensions
//! above two, where it is driven by a fixed-seed ChaCha stream.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{self, ComplexMatrix};
use crate::scalar::Real;
use crate::state::{BipartiteState, DensityMatrix};

pub fn complex_gaussian<T: Real>(rng: &mut impl Rng) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// Haar-random unit vector.
pub fn pure_state_vector<T: Real>(dim: usize, rng: &mut impl Rng) -> Vec<Complex<T>> {
    loop {
        let v: Vec<Complex<T>> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let n = linalg::norm(&v);
        if n > T::lit(1e-6) {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn pure_state<T: Real>(dim: usize, rng: &mut impl Rng) -> DensityMatrix<T> {
    DensityMatrix::pure(&pure_state_vector(dim, rng)).expect("unit vector")
}

/// G·G† / Tr(G·G†) with iid complex Gaussian G (Hilbert–Schmidt measure).
pub fn density_matrix<T: Real>(dim: usize, rng: &mut impl Rng) -> DensityMatrix<T> {
    density_matrix_with_rank(dim, dim, rng)
}

/// As [`density_matrix`] with a dim × rank Ginibre factor.
pub fn density_matrix_with_rank<T: Real>(
    dim: usize,
    rank: usize,
    rng: &mut impl Rng,
) -> DensityMatrix<T> {
    let g = ComplexMatrix::from_fn(dim, rank.max(1), |_, _| complex_gaussian(rng));
    let w = g.matmul(&g.adjoint()).expect("shapes agree");
    let tr = w.trace().re;
    DensityMatrix::new(w.scale(T::one() / tr)).expect("G G† is a valid state")
}

/// Σ_k p_k ρ_k^A ⊗ ρ_k^B with Dirichlet-like weights and `terms` product terms.
pub fn separable_state<T: Real>(dim_a: usize, dim_b: usize, terms: usize, rng: &mut impl Rng) -> BipartiteState<T> {
    let raw: Vec<f64> = (0..terms.max(1)).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(T, DensityMatrix<T>, DensityMatrix<T>)> = raw
        .iter()
        .map(|w| {
            let a = if rng.random_bool(0.5) { pure_state(dim_a, rng) } else { density_matrix(dim_a, rng) };
            let b = if rng.random_bool(0.5) { pure_state(dim_b, rng) } else { density_matrix(dim_b, rng) };
            (T::lit(w / total), a, b)
        })
        .collect();
    BipartiteState::separable(&parts).expect("weights sum to one")
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn unitary<T: Real>(dim: usize, rng: &mut impl Rng) -> ComplexMatrix<T> {
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex<T>> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        for u in &cols {
            let proj = linalg::inner(u, &v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= ui * proj;
            }
        }
        let n = linalg::norm(&v);
        if n > T::lit(1e-6) {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Uniform random rotation as a right-handed orthonormal frame (rows).
pub fn rotation<T: Real>(rng: &mut impl Rng) -> [[T; 3]; 3] {
    let mut frame = [[T::zero(); 3]; 3];
    for k in 0..2 {
        loop {
            let mut v = [T::zero(); 3];
            for x in v.iter_mut() {
                let s: f64 = StandardNormal.sample(rng);
                *x = T::lit(s);
            }
            for prev in frame.iter().take(k) {
                let d = dot3(prev, &v);
                for i in 0..3 {
                    v[i] -= prev[i] * d;
                }
            }
            let n = dot3(&v, &v).sqrt();
            if n > T::lit(1e-6) {
                frame[k] = v.map(|x| x / n);
                break;
            }
        }
    }
    frame[2] = cross3(&frame[0], &frame[1]);
    frame
}

pub(crate) fn dot3<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3<T: Real>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::orthonormality_defect;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..6 {
            let u: ComplexMatrix<f64> = unitary(d, &mut rng);
            assert!(orthonormality_defect(&u) < 1e-12);
        }
    }

    #[test]
    fn rotations_are_right_handed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let r: [[f64; 3]; 3] = rotation(&mut rng);
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot3(&r[i], &r[j]) - expect).abs() < 1e-12);
                }
            }
            let c = cross3(&r[1], &r[2]);
            assert!((dot3(&c, &r[0]) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn low_rank_states_have_rank_deficit() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho: DensityMatrix<f64> = density_matrix_with_rank(4, 1, &mut rng);
        let ev = rho.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-10);
        assert!(ev[1].abs() < 1e-10);
    }
}
