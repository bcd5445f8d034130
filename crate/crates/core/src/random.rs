// Copyright 2026 The qseal Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Random states and operators for test-case generation.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matcore::{hermitian_eigendecomp, matrix_sqrt_psd, ComplexMatrix, C64};

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("gaussian entries are finite")
}

/// Haar-random unit vector.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// `G G^† / tr(G G^†)` for a `dim × rank` Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(dim, rank.max(1), rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_real(1.0 / tr).hermitian_part()
}

/// Random PSD matrix `G G^† / dim` with a square Gaussian `G`.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    (&g * &g.adjoint())
        .scale_real(1.0 / dim as f64)
        .hermitian_part()
}

/// Haar-random unitary: Gram–Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for u in &cols {
                let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Splits a PSD matrix `r` into `parts` random PSD summands.
///
/// With random positive definite `Q_k` and `T = Σ Q_k`, the pieces
/// `r^{1/2} T^{-1/2} Q_k T^{-1/2} r^{1/2}` are PSD and sum to `r`.
pub fn split_psd<R: Rng + ?Sized>(
    r: &ComplexMatrix,
    parts: usize,
    rng: &mut R,
) -> Result<Vec<ComplexMatrix>> {
    let dim = r.rows();
    if parts <= 1 {
        return Ok(vec![r.clone(); parts]);
    }
    let ridge = ComplexMatrix::identity(dim).scale_real(0.05);
    let qs: Vec<ComplexMatrix> = (0..parts)
        .map(|_| {
            let w: f64 = rng.random_range(0.2..1.0);
            &random_psd(dim, rng).scale_real(w) + &ridge
        })
        .collect();
    let total = qs.iter().skip(1).fold(qs[0].clone(), |acc, q| &acc + q);
    let inv_sqrt = hermitian_eigendecomp(&total)?.map_eigenvalues(|l| 1.0 / l.sqrt());
    let root = matrix_sqrt_psd(r)?;
    let left = &root * &inv_sqrt;
    let right = left.adjoint();
    Ok(qs
        .iter()
        .map(|q| (&(&left * q) * &right).hermitian_part())
        .collect())
}
