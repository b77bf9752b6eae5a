//! Exact finite-frame throughputs via the sampled-matrix ("virtual MIMO")
//! formulation — the numerical ground truth the closed forms are tested
//! against.
//!
//! Oversampling the broadcast phase at the two offsets `iT` and
//! `(i + tau) T` yields 2N matched-filter outputs per frame whose Gram
//! matrix `R` is symmetric, unit-diagonal, and tridiagonal with
//! off-diagonals alternating `1 - tau`, `tau`. The same `R` is the
//! covariance of the oversampled noise, so every rate below is a
//! difference of two log-determinants of symmetric positive definite
//! banded matrices.
//!
//! Rates are computed as `logdet(S + signal) - logdet(S)` rather than via
//! the explicit inverse: it preserves symmetry and is numerically stable.
//! All matrices involved have bandwidth <= 3 after interleaving the relay
//! samples, so a banded Cholesky keeps the whole path at O(N) memory and
//! flops per factorization sweep.

use crate::model::{FrameConfig, LinkChannels, PowerAllocation, StrongUserSnrs};
use crate::{Error, Result};

/// Conditioning window half-width: the matrix path accepts
/// `tau` in `[TAU_WINDOW, 1 - TAU_WINDOW]`. At the endpoints the two
/// sample streams coincide and `R` is singular; the `tau = 0` system is
/// served by the synchronous closed forms instead.
pub const TAU_WINDOW: f64 = 1e-3;

/// Frame-length cap for the matrix path; closed forms cover larger
/// frames.
pub const MAX_MATRIX_FRAME: u32 = 4096;

// ---------------------------------------------------------------------------
// Banded symmetric storage + Cholesky log-determinant
// ---------------------------------------------------------------------------

/// Symmetric matrix stored by lower diagonals: `data[d * dim + i]` holds
/// `A[i + d][i]` for `d <= bandwidth`. Entries further from the diagonal
/// are structurally zero.
#[derive(Debug, Clone)]
pub struct SymBanded {
    dim: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl SymBanded {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let bandwidth = bandwidth.min(dim - 1);
        Self { dim, bandwidth, data: vec![0.0; (bandwidth + 1) * dim] }
    }

    /// Diagonal matrix (bandwidth 0).
    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), 0);
        m.data.copy_from_slice(values);
        m
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Entry `A[i][j]`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i >= j { (j, i) } else { (i, j) };
        let d = hi - lo;
        if d > self.bandwidth {
            0.0
        } else {
            self.data[d * self.dim + lo]
        }
    }

    /// Add `v` to `A[i][j]` (and by symmetry `A[j][i]`). Panics outside
    /// the band: callers size the band to the structure they build.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i >= j { (j, i) } else { (i, j) };
        let d = hi - lo;
        assert!(d <= self.bandwidth, "entry ({i},{j}) outside bandwidth {}", self.bandwidth);
        self.data[d * self.dim + lo] += v;
    }

    /// Base-2 log-determinant via an in-place banded Cholesky
    /// factorization. Fails with [`Error::NotPositiveDefinite`] on a
    /// non-positive pivot.
    pub fn cholesky_logdet2(mut self) -> Result<f64> {
        let n = self.dim;
        let bw = self.bandwidth;
        let mut log_sum = 0.0;
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut d = self.data[j]; // A[j][j]
            for k in lo..j {
                let ljk = self.data[(j - k) * n + k];
                d -= ljk * ljk;
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { index: j, pivot: d });
            }
            let ljj = d.sqrt();
            log_sum += ljj.ln();
            self.data[j] = ljj;
            let hi = (j + bw).min(n - 1);
            for i in j + 1..=hi {
                let mut s = self.data[(i - j) * n + j]; // A[i][j]
                let klo = i.saturating_sub(bw).max(lo);
                for k in klo..j {
                    s -= self.data[(i - k) * n + k] * self.data[(j - k) * n + k];
                }
                self.data[(i - j) * n + j] = s / ljj;
            }
        }
        Ok(2.0 * log_sum / std::f64::consts::LN_2)
    }
}

/// Base-2 log-determinant of a symmetric positive definite matrix.
///
/// Consumes `matrix` (the factorization is done in place on the band
/// storage).
pub fn logdet_spd(matrix: SymBanded) -> Result<f64> {
    matrix.cholesky_logdet2()
}

// ---------------------------------------------------------------------------
// The Gram matrix R
// ---------------------------------------------------------------------------

/// The 2N x 2N Gram matrix of the oversampled matched-filter outputs:
/// unit diagonal, tridiagonal, off-diagonals alternating `1 - tau`,
/// `tau` starting with `1 - tau`. Positive definite for `tau` strictly
/// inside `(0, 1)`. Also the covariance of the oversampled noise.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    n: u32,
    tau: f64,
    entries: SymBanded,
}

impl GramMatrix {
    /// Frame length N (the matrix is 2N x 2N).
    pub fn frame_len(&self) -> u32 {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn dim(&self) -> usize {
        2 * self.n as usize
    }

    /// Entry `R[i][j]`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j)
    }

    /// The banded storage, e.g. for a direct `logdet_spd` call.
    pub fn entries(&self) -> &SymBanded {
        &self.entries
    }
}

fn check_matrix_frame(frame: FrameConfig) -> Result<()> {
    if frame.n > MAX_MATRIX_FRAME {
        return Err(Error::FrameTooLarge { n: frame.n, cap: MAX_MATRIX_FRAME });
    }
    if !(TAU_WINDOW..=1.0 - TAU_WINDOW).contains(&frame.tau) {
        return Err(Error::IllConditionedTau { tau: frame.tau, min: TAU_WINDOW, max: 1.0 - TAU_WINDOW });
    }
    Ok(())
}

/// Build the Gram matrix `R` for a frame. Rejects `tau` outside the
/// conditioning window and frames beyond [`MAX_MATRIX_FRAME`].
pub fn build_r_matrix(frame: FrameConfig) -> Result<GramMatrix> {
    check_matrix_frame(frame)?;
    let dim = 2 * frame.n as usize;
    let mut m = SymBanded::zeros(dim, 1.min(dim - 1));
    for i in 0..dim {
        m.add(i, i, 1.0);
    }
    for i in 0..dim - 1 {
        // super-diagonal alternates 1-tau, tau, 1-tau, ...
        let v = if i.is_multiple_of(2) { 1.0 - frame.tau } else { frame.tau };
        m.add(i + 1, i, v);
    }
    Ok(GramMatrix { n: frame.n, tau: frame.tau, entries: m })
}

// ---------------------------------------------------------------------------
// Signal structure helpers
// ---------------------------------------------------------------------------

/// Nonzero pattern of column `k` of `R G1` (odd columns of R, 1-based):
/// rows `2k-1, 2k, 2k+1` in 0-based terms, clipped to the matrix.
/// Returns (row, value) pairs.
fn rg1_column(n: usize, tau: f64, k: usize) -> [(usize, f64); 3] {
    let dim = 2 * n;
    let c = 2 * k; // 0-based column index into R
    let mut out = [(usize::MAX, 0.0); 3];
    let mut idx = 0;
    if c > 0 {
        out[idx] = (c - 1, if (c - 1).is_multiple_of(2) { 1.0 - tau } else { tau });
        idx += 1;
    }
    out[idx] = (c, 1.0);
    idx += 1;
    if c + 1 < dim {
        out[idx] = (c + 1, if c.is_multiple_of(2) { 1.0 - tau } else { tau });
    }
    out
}

/// Same for `R G2` (even columns of R, 1-based): column `2k + 1`.
fn rg2_column(n: usize, tau: f64, k: usize) -> [(usize, f64); 3] {
    let dim = 2 * n;
    let c = 2 * k + 1;
    let mut out = [(usize::MAX, 0.0); 3];
    out[0] = (c - 1, if (c - 1).is_multiple_of(2) { 1.0 - tau } else { tau });
    out[1] = (c, 1.0);
    if c + 1 < dim {
        out[2] = (c + 1, if c.is_multiple_of(2) { 1.0 - tau } else { tau });
    }
    out
}

/// Accumulate `scale * c c^T` for one sparse column into a banded matrix,
/// optionally remapping row indices.
fn add_outer(m: &mut SymBanded, col: &[(usize, f64)], scale: f64, map: impl Fn(usize) -> usize) {
    if scale == 0.0 {
        return;
    }
    for &(i, vi) in col {
        if i == usize::MAX {
            continue;
        }
        for &(j, vj) in col {
            if j == usize::MAX || j > i {
                continue;
            }
            m.add(map(i), map(j), scale * vi * vj);
        }
    }
}

/// `R + mu1 (R G1)(R G1)^T [+ mu2 (R G2)(R G2)^T]` as a banded matrix of
/// bandwidth 2.
fn broadcast_matrix(frame: FrameConfig, mu1: f64, mu2: f64) -> SymBanded {
    let n = frame.n as usize;
    let dim = 2 * n;
    let tau = frame.tau;
    let mut m = SymBanded::zeros(dim, 2.min(dim - 1));
    for i in 0..dim {
        m.add(i, i, 1.0);
    }
    for i in 0..dim - 1 {
        let v = if i.is_multiple_of(2) { 1.0 - tau } else { tau };
        m.add(i + 1, i, v);
    }
    for k in 0..n {
        add_outer(&mut m, &rg1_column(n, tau, k), mu1, |i| i);
        add_outer(&mut m, &rg2_column(n, tau, k), mu2, |i| i);
    }
    m
}

// ---------------------------------------------------------------------------
// Matrix-form rates
// ---------------------------------------------------------------------------

/// Strong user decoding its own message after subtracting the weak
/// user's block (perfect SIC):
/// `[logdet(R + mu1 RG1 G1^T R^T) - logdet(R)] / (2N + tau)`.
pub fn rate_strong_own_matrix(frame: FrameConfig, snrs: StrongUserSnrs) -> Result<f64> {
    check_matrix_frame(frame)?;
    let with_signal = broadcast_matrix(frame, snrs.mu1, 0.0);
    let noise = broadcast_matrix(frame, 0.0, 0.0);
    let ld1 = with_signal.cholesky_logdet2()?;
    let ld0 = noise.cholesky_logdet2()?;
    Ok((ld1 - ld0) / frame.channel_uses())
}

/// Strong user decoding the weak user's message first, treating its own
/// as noise:
/// `[logdet(R + mu1 S1 + mu2 S2) - logdet(R + mu1 S1)] / (2N + tau)`
/// with `Si = R Gi Gi^T R^T`.
pub fn rate_strong_cross_matrix(frame: FrameConfig, snrs: StrongUserSnrs) -> Result<f64> {
    check_matrix_frame(frame)?;
    let both = broadcast_matrix(frame, snrs.mu1, snrs.mu2);
    let own_only = broadcast_matrix(frame, snrs.mu1, 0.0);
    let ld1 = both.cholesky_logdet2()?;
    let ld0 = own_only.cholesky_logdet2()?;
    Ok((ld1 - ld0) / frame.channel_uses())
}

/// Weak-user stacked model: broadcast samples (2N) plus relay samples
/// (N), noise covariance `blockdiag(R, I)`, with
/// `W1 = [h2 sqrt(p1) R G1; 0]` and
/// `W2 = [h2 sqrt(p2) R G2; h12 sqrt(pr) I]`.
///
/// Rows are interleaved per symbol (two broadcast samples, then the relay
/// sample) so the 3N system keeps bandwidth 3. The permutation leaves the
/// determinants unchanged.
fn weak_matrix(frame: FrameConfig, channels: LinkChannels, powers: PowerAllocation, with_w2: bool) -> SymBanded {
    let n = frame.n as usize;
    let dim = 3 * n;
    let tau = frame.tau;
    // broadcast sample i -> 3*(i/2) + i%2, relay sample k -> 3k + 2
    let bmap = |i: usize| 3 * (i / 2) + i % 2;

    let nu1 = powers.p1 * channels.h2_sq;
    let s2 = (powers.p2 * channels.h2_sq).sqrt();
    let sr = (powers.pr * channels.h12_sq).sqrt();

    let mut m = SymBanded::zeros(dim, 3.min(dim - 1));
    // noise covariance blockdiag(R, I)
    for i in 0..dim {
        m.add(i, i, 1.0);
    }
    for i in 0..2 * n - 1 {
        let v = if i.is_multiple_of(2) { 1.0 - tau } else { tau };
        m.add(bmap(i + 1), bmap(i), v);
    }
    // W1 W1^T = nu1 (RG1)(RG1)^T on the broadcast block
    for k in 0..n {
        add_outer(&mut m, &rg1_column(n, tau, k), nu1, bmap);
    }
    if with_w2 {
        // W2 W2^T: s2^2 (RG2)(RG2)^T, cross block s2*sr RG2, relay sr^2 I
        for k in 0..n {
            let col = rg2_column(n, tau, k);
            add_outer(&mut m, &col, s2 * s2, bmap);
            let relay_row = 3 * k + 2;
            for &(i, vi) in &col {
                if i != usize::MAX {
                    m.add(relay_row, bmap(i), s2 * sr * vi);
                }
            }
            m.add(relay_row, relay_row, sr * sr);
        }
    }
    m
}

/// Weak user's throughput from the stacked broadcast + relay model:
/// `[logdet(RN + W1 W1^T + W2 W2^T) - logdet(RN + W1 W1^T)] / (2N + tau)`.
pub fn rate_weak_matrix(frame: FrameConfig, channels: LinkChannels, powers: PowerAllocation) -> Result<f64> {
    check_matrix_frame(frame)?;
    let full = weak_matrix(frame, channels, powers, true);
    let base = weak_matrix(frame, channels, powers, false);
    let ld1 = full.cholesky_logdet2()?;
    let ld0 = base.cholesky_logdet2()?;
    Ok((ld1 - ld0) / frame.channel_uses())
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
