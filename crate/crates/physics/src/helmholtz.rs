//! Heterogeneous Helmholtz boundary-value problem
//! `-div(kappa grad u) + eta^2 u = f` with homogeneous Dirichlet conditions
//! on `[-pi, pi]^2`.
//!
//! The coefficients are Gaussian bumps plus one,
//! `kappa = phi(.; alpha1, c1) + 1`, `eta = phi(.; alpha2, c2) + 1`, so the
//! trainable parameter vector is (alpha1, c1x, c1y, alpha2, c2x, c2y).
//!
//! Discretization: flux-form 5-point stencil with arithmetic face averages
//! of kappa and eta^2 lumped at nodes, interior unknowns only. The matrix is
//! symmetric positive definite for positive kappa; solves go through a
//! banded Cholesky factorization and the factor is reused for the adjoint
//! solve when assembling parameter gradients.

use hyco_core::{BoundaryKind, Grid2D, ScalarField};
use serde::{Deserialize, Serialize};

use crate::error::PhysicsError;

/// `phi(x, y; alpha, c) = alpha * exp(-(x - cx)^2 - (y - cy)^2)`.
#[inline]
pub fn gaussian_bump(x: f64, y: f64, amplitude: f64, cx: f64, cy: f64) -> f64 {
    let dx = x - cx;
    let dy = y - cy;
    amplitude * (-dx * dx - dy * dy).exp()
}

/// The six trainable coefficient parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelmholtzParams {
    pub alpha1: f64,
    pub c1x: f64,
    pub c1y: f64,
    pub alpha2: f64,
    pub c2x: f64,
    pub c2y: f64,
}

impl HelmholtzParams {
    /// Amplitudes are kept above this floor so kappa and eta stay positive.
    pub const AMPLITUDE_FLOOR: f64 = -0.99;

    /// Ground-truth coefficients of the benchmark.
    pub const GROUND_TRUTH: HelmholtzParams = HelmholtzParams {
        alpha1: 4.0,
        c1x: -1.0,
        c1y: -1.0,
        alpha2: 1.0,
        c2x: 2.0,
        c2y: 1.0,
    };

    pub fn to_vec(&self) -> [f64; 6] {
        [
            self.alpha1,
            self.c1x,
            self.c1y,
            self.alpha2,
            self.c2x,
            self.c2y,
        ]
    }

    pub fn from_vec(v: &[f64]) -> Result<Self, PhysicsError> {
        if v.len() != 6 {
            return Err(PhysicsError::InvalidParams(format!(
                "expected 6 parameters, got {}",
                v.len()
            )));
        }
        Ok(Self {
            alpha1: v[0],
            c1x: v[1],
            c1y: v[2],
            alpha2: v[3],
            c2x: v[4],
            c2y: v[5],
        })
    }

    /// Projection onto the admissible set: clamps both amplitudes to the
    /// floor that keeps kappa, eta positive.
    pub fn project(v: &mut [f64]) {
        if v.len() >= 4 {
            v[0] = v[0].max(Self::AMPLITUDE_FLOOR);
            v[3] = v[3].max(Self::AMPLITUDE_FLOOR);
        }
    }

    pub fn kappa(&self, x: f64, y: f64) -> f64 {
        gaussian_bump(x, y, self.alpha1, self.c1x, self.c1y) + 1.0
    }

    pub fn eta(&self, x: f64, y: f64) -> f64 {
        gaussian_bump(x, y, self.alpha2, self.c2x, self.c2y) + 1.0
    }

    /// (d kappa / d alpha1, d kappa / d c1x, d kappa / d c1y).
    #[inline]
    pub fn kappa_partials(&self, x: f64, y: f64) -> [f64; 3] {
        let e = gaussian_bump(x, y, 1.0, self.c1x, self.c1y);
        [
            e,
            self.alpha1 * e * 2.0 * (x - self.c1x),
            self.alpha1 * e * 2.0 * (y - self.c1y),
        ]
    }

    /// (d eta / d alpha2, d eta / d c2x, d eta / d c2y).
    #[inline]
    pub fn eta_partials(&self, x: f64, y: f64) -> [f64; 3] {
        let e = gaussian_bump(x, y, 1.0, self.c2x, self.c2y);
        [
            e,
            self.alpha2 * e * 2.0 * (x - self.c2x),
            self.alpha2 * e * 2.0 * (y - self.c2y),
        ]
    }
}

/// Reference solution of the benchmark, `u(x, y) = sin(x) sin(y)`.
pub fn reference_solution(x: f64, y: f64) -> f64 {
    x.sin() * y.sin()
}

fn check_benchmark_grid(grid: &Grid2D) -> Result<(), PhysicsError> {
    if grid.boundary != BoundaryKind::DirichletZero {
        return Err(PhysicsError::GridMismatch(
            "Helmholtz runs on a Dirichlet grid".into(),
        ));
    }
    let pi = std::f64::consts::PI;
    let ok = (grid.x_min + pi).abs() < 1e-9
        && (grid.x_max - pi).abs() < 1e-9
        && (grid.y_min + pi).abs() < 1e-9
        && (grid.y_max - pi).abs() < 1e-9;
    if !ok {
        return Err(PhysicsError::GridMismatch(format!(
            "expected [-pi, pi]^2, got [{}, {}] x [{}, {}]",
            grid.x_min, grid.x_max, grid.y_min, grid.y_max
        )));
    }
    Ok(())
}

/// Analytic forcing obtained by substituting the reference solution into the
/// equation: `f = -(kappa lap u + grad kappa . grad u) + eta^2 u` with
/// `lap u = -2 u` for `u = sin(x) sin(y)`, evaluated nodewise in closed form.
pub fn compute_forcing(grid: &Grid2D, params: &HelmholtzParams) -> Result<ScalarField, PhysicsError> {
    check_benchmark_grid(grid)?;
    Ok(ScalarField::from_fn(*grid, |x, y| {
        let u = reference_solution(x, y);
        let ux = x.cos() * y.sin();
        let uy = x.sin() * y.cos();
        let kap = params.kappa(x, y);
        let e1 = gaussian_bump(x, y, params.alpha1, params.c1x, params.c1y);
        let kx = e1 * -2.0 * (x - params.c1x);
        let ky = e1 * -2.0 * (y - params.c1y);
        let eta = params.eta(x, y);
        2.0 * kap * u - (kx * ux + ky * uy) + eta * eta * u
    })?)
}

/// Assembled interior system: symmetric penta-diagonal matrix plus right-hand
/// side. `east[p]`/`north[p]` hold the (positive) coupling to the +x/+y
/// interior neighbor and are zero where that neighbor is a boundary node.
#[derive(Debug, Clone)]
pub struct HelmholtzSystem {
    grid: Grid2D,
    ni: usize,
    diag: Vec<f64>,
    east: Vec<f64>,
    north: Vec<f64>,
    rhs: Vec<f64>,
}

/// Flux-form assembly with arithmetic face means of kappa; errors when kappa
/// is nonpositive anywhere on the grid.
pub fn helmholtz_assemble(
    params: &HelmholtzParams,
    grid: &Grid2D,
    f: &ScalarField,
) -> Result<HelmholtzSystem, PhysicsError> {
    if grid.boundary != BoundaryKind::DirichletZero {
        return Err(PhysicsError::GridMismatch(
            "Helmholtz runs on a Dirichlet grid".into(),
        ));
    }
    if f.grid() != grid {
        return Err(PhysicsError::GridMismatch(
            "forcing field lives on a different grid".into(),
        ));
    }
    let (nx, ny) = (grid.nx, grid.ny);
    let ni = nx - 2;
    let n = ni * (ny - 2);

    // Node coefficients.
    let mut kappa = Vec::with_capacity(grid.n_nodes());
    let mut eta2 = Vec::with_capacity(grid.n_nodes());
    for iy in 0..ny {
        for ix in 0..nx {
            let (x, y) = (grid.x(ix), grid.y(iy));
            let k = params.kappa(x, y);
            if !(k > 0.0) {
                return Err(PhysicsError::NonpositiveKappa { x, y, value: k });
            }
            kappa.push(k);
            let e = params.eta(x, y);
            eta2.push(e * e);
        }
    }

    let ihx2 = 1.0 / (grid.hx() * grid.hx());
    let ihy2 = 1.0 / (grid.hy() * grid.hy());
    let mut diag = vec![0.0; n];
    let mut east = vec![0.0; n];
    let mut north = vec![0.0; n];
    let mut rhs = vec![0.0; n];

    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let p = (j - 1) * ni + (i - 1);
            let g = grid.idx(i, j);
            let k_e = 0.5 * (kappa[g] + kappa[grid.idx(i + 1, j)]) * ihx2;
            let k_w = 0.5 * (kappa[g] + kappa[grid.idx(i - 1, j)]) * ihx2;
            let k_n = 0.5 * (kappa[g] + kappa[grid.idx(i, j + 1)]) * ihy2;
            let k_s = 0.5 * (kappa[g] + kappa[grid.idx(i, j - 1)]) * ihy2;
            diag[p] = k_e + k_w + k_n + k_s + eta2[g];
            if i + 1 <= nx - 2 {
                east[p] = k_e;
            }
            if j + 1 <= ny - 2 {
                north[p] = k_n;
            }
            rhs[p] = f.values()[g];
        }
    }
    Ok(HelmholtzSystem {
        grid: *grid,
        ni,
        diag,
        east,
        north,
        rhs,
    })
}

impl HelmholtzSystem {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn n_unknowns(&self) -> usize {
        self.diag.len()
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Dense matrix entry, for tests and diagnostics.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let (lo, hi) = if row <= col { (row, col) } else { (col, row) };
        if lo == hi {
            self.diag[lo]
        } else if hi == lo + 1 {
            -self.east[lo]
        } else if hi == lo + self.ni {
            -self.north[lo]
        } else {
            0.0
        }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.diag.len();
        let ni = self.ni;
        for p in 0..n {
            let mut acc = self.diag[p] * x[p];
            if self.east[p] != 0.0 {
                acc -= self.east[p] * x[p + 1];
            }
            if p >= 1 && self.east[p - 1] != 0.0 {
                acc -= self.east[p - 1] * x[p - 1];
            }
            if self.north[p] != 0.0 {
                acc -= self.north[p] * x[p + ni];
            }
            if p >= ni && self.north[p - ni] != 0.0 {
                acc -= self.north[p - ni] * x[p - ni];
            }
            y[p] = acc;
        }
    }

    /// Full stencil row sum. The diffusion part cancels for rows whose four
    /// neighbors are interior, leaving only the lumped eta^2 term.
    pub fn diffusion_row_sum(&self, row: usize) -> f64 {
        let mut sum = self.diag[row];
        if self.east[row] != 0.0 {
            sum -= self.east[row];
        }
        if row >= 1 && self.east[row - 1] != 0.0 {
            sum -= self.east[row - 1];
        }
        if self.north[row] != 0.0 {
            sum -= self.north[row];
        }
        if row >= self.ni && self.north[row - self.ni] != 0.0 {
            sum -= self.north[row - self.ni];
        }
        sum
    }
}

/// Banded Cholesky factor of the interior operator.
#[derive(Debug, Clone)]
struct BandCholesky {
    n: usize,
    bw: usize,
    /// Row-major band: `l[i * (bw + 1) + d]` holds `L[i][i - d]`.
    l: Vec<f64>,
}

impl BandCholesky {
    fn factor(sys: &HelmholtzSystem) -> Result<Self, PhysicsError> {
        let n = sys.n_unknowns();
        let bw = sys.ni;
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        let band_a = |i: usize, j: usize| -> f64 {
            // i >= j within the band.
            if i == j {
                sys.diag[i]
            } else if i == j + 1 {
                -sys.east[j]
            } else if i == j + bw {
                -sys.north[j]
            } else {
                0.0
            }
        };
        for j in 0..n {
            let k_lo = j.saturating_sub(bw);
            let mut sum = band_a(j, j);
            for k in k_lo..j {
                let v = l[j * w + (j - k)];
                sum -= v * v;
            }
            if !(sum > 0.0) {
                return Err(PhysicsError::NotPositiveDefinite(j));
            }
            let djj = sum.sqrt();
            l[j * w] = djj;
            let i_hi = (j + bw).min(n - 1);
            for i in j + 1..=i_hi {
                let mut sum = band_a(i, j);
                let k_lo = i.saturating_sub(bw).max(k_lo);
                for k in k_lo..j {
                    sum -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                l[i * w + (i - j)] = sum / djj;
            }
        }
        Ok(Self { n, bw, l })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let w = self.bw + 1;
        let mut x = b.to_vec();
        // L y = b.
        for i in 0..self.n {
            let k_lo = i.saturating_sub(self.bw);
            let mut sum = x[i];
            for k in k_lo..i {
                sum -= self.l[i * w + (i - k)] * x[k];
            }
            x[i] = sum / self.l[i * w];
        }
        // L^T x = y.
        for i in (0..self.n).rev() {
            let k_hi = (i + self.bw).min(self.n - 1);
            let mut sum = x[i];
            for k in i + 1..=k_hi {
                sum -= self.l[k * w + (k - i)] * x[k];
            }
            x[i] = sum / self.l[i * w];
        }
        x
    }
}

/// A solved system: the solution field (zero on the boundary) plus the
/// retained factorization for adjoint solves.
pub struct HelmholtzSolved {
    system: HelmholtzSystem,
    factor: BandCholesky,
    u_interior: Vec<f64>,
    u_full: ScalarField,
}

/// Relative residual tolerance the solve must meet.
pub const SOLVE_TOLERANCE: f64 = 1e-10;

/// Factors and solves `A u = f`, verifying the relative residual.
pub fn helmholtz_solve(system: HelmholtzSystem) -> Result<HelmholtzSolved, PhysicsError> {
    let factor = BandCholesky::factor(&system)?;
    let u_interior = factor.solve(&system.rhs);

    let norm_b: f64 = system.rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm_b > 0.0 {
        let mut r = vec![0.0; system.n_unknowns()];
        system.matvec(&u_interior, &mut r);
        let res: f64 = r
            .iter()
            .zip(&system.rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let rel = res / norm_b;
        if !(rel <= SOLVE_TOLERANCE) {
            return Err(PhysicsError::ResidualTooLarge {
                residual: rel,
                tol: SOLVE_TOLERANCE,
            });
        }
    }

    let grid = system.grid;
    let (nx, ni) = (grid.nx, system.ni);
    let mut full = vec![0.0; grid.n_nodes()];
    for j in 1..grid.ny - 1 {
        for i in 1..nx - 1 {
            full[grid.idx(i, j)] = u_interior[(j - 1) * ni + (i - 1)];
        }
    }
    let u_full = ScalarField::new(grid, full)?;
    Ok(HelmholtzSolved {
        system,
        factor,
        u_interior,
        u_full,
    })
}

impl HelmholtzSolved {
    pub fn field(&self) -> &ScalarField {
        &self.u_full
    }

    pub fn system(&self) -> &HelmholtzSystem {
        &self.system
    }

    /// Discrete-adjoint gradient of a scalar loss in the six coefficient
    /// parameters.
    ///
    /// `dl_du` is dL/du on the full grid (boundary entries are ignored: the
    /// boundary values are pinned). One adjoint solve `A^T w = dL/du` (A is
    /// symmetric, so the retained factor is reused), then
    /// `grad = -w^T (dA/d lambda) u`, with dA assembled analytically from the
    /// Gaussian-bump partials. The forcing does not depend on the
    /// parameters, so there is no df/d lambda term.
    pub fn adjoint_gradient(
        &self,
        params: &HelmholtzParams,
        dl_du: &[f64],
    ) -> Result<[f64; 6], PhysicsError> {
        let grid = &self.system.grid;
        if dl_du.len() != grid.n_nodes() {
            return Err(PhysicsError::GridMismatch(format!(
                "dL/du has {} entries, grid has {}",
                dl_du.len(),
                grid.n_nodes()
            )));
        }
        let (nx, ny) = (grid.nx, grid.ny);
        let ni = self.system.ni;
        let mut g = vec![0.0; self.system.n_unknowns()];
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                g[(j - 1) * ni + (i - 1)] = dl_du[grid.idx(i, j)];
            }
        }
        let w = self.factor.solve(&g);

        // Zero-extended views of u and w over the full grid.
        let full_of = |int: &[f64]| {
            let mut v = vec![0.0; grid.n_nodes()];
            for j in 1..ny - 1 {
                for i in 1..nx - 1 {
                    v[grid.idx(i, j)] = int[(j - 1) * ni + (i - 1)];
                }
            }
            v
        };
        let uf = full_of(&self.u_interior);
        let wf = full_of(&w);

        let ihx2 = 1.0 / (grid.hx() * grid.hx());
        let ihy2 = 1.0 / (grid.hy() * grid.hy());
        let mut grad = [0.0; 6];

        // Diffusion faces: a face between nodes p and q with coefficient
        // kF = (kappa_p + kappa_q) / (2 h^2) contributes
        // dkF * (w_p - w_q)(u_p - u_q) to w^T (dA) u (boundary values are 0,
        // which also covers faces touching the boundary).
        let mut face = |pa: (usize, usize), pb: (usize, usize), ih2: f64| {
            let (ga, gb) = (grid.idx(pa.0, pa.1), grid.idx(pb.0, pb.1));
            let dw = wf[ga] - wf[gb];
            let du = uf[ga] - uf[gb];
            if dw == 0.0 || du == 0.0 {
                return;
            }
            let pa_xy = (grid.x(pa.0), grid.y(pa.1));
            let pb_xy = (grid.x(pb.0), grid.y(pb.1));
            let da = params.kappa_partials(pa_xy.0, pa_xy.1);
            let db = params.kappa_partials(pb_xy.0, pb_xy.1);
            let scale = dw * du * 0.5 * ih2;
            for c in 0..3 {
                grad[c] -= scale * (da[c] + db[c]);
            }
        };
        // x-faces (interior rows), y-faces (interior columns).
        for j in 1..ny - 1 {
            for i in 0..nx - 1 {
                face((i, j), (i + 1, j), ihx2);
            }
        }
        for j in 0..ny - 1 {
            for i in 1..nx - 1 {
                face((i, j), (i, j + 1), ihy2);
            }
        }

        // Mass term: d(eta_p^2) = 2 eta_p (d eta_p), lumped at interior nodes.
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let gidx = grid.idx(i, j);
                let wu = wf[gidx] * uf[gidx];
                if wu == 0.0 {
                    continue;
                }
                let (x, y) = (grid.x(i), grid.y(j));
                let eta = params.eta(x, y);
                let de = params.eta_partials(x, y);
                for c in 0..3 {
                    grad[3 + c] -= wu * 2.0 * eta * de[c];
                }
            }
        }
        Ok(grad)
    }
}
