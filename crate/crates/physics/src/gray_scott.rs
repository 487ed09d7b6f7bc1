//! Gray-Scott reaction-diffusion on a periodic grid: forward-Euler stepping
//! with the 5-point Laplacian, strided trajectory snapshots, and co-integrated
//! forward sensitivity fields with respect to the two diffusivities.
//!
//! Kinetics:
//!
//! ```text
//! u_t = D_u lap(u) - u v^2 + F (1 - u)
//! v_t = D_v lap(v) + u v^2 - (F + k) v
//! ```
//!
//! The uniform state (u, v) = (1, 0) is an exact fixed point for every
//! admissible parameter set, which the tests pin down.

use hyco_core::dataset::Evaluable;
use hyco_core::interp::interpolate_values;
use hyco_core::{BoundaryKind, CoreError, Grid2D, Rect, Region, ScalarField, SpaceTimePoint};
use serde::{Deserialize, Serialize};

use crate::error::PhysicsError;

/// Gray-Scott coefficients; the diffusivities are the trainable pair, feed
/// and kill rates are fixed constants of the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrayScottParams {
    pub d_u: f64,
    pub d_v: f64,
    pub feed: f64,
    pub kill: f64,
}

impl GrayScottParams {
    /// Ground-truth coefficients of the benchmark data generator.
    pub const GROUND_TRUTH: GrayScottParams = GrayScottParams {
        d_u: 2e-6,
        d_v: 0.8e-6,
        feed: 0.018,
        kill: 0.051,
    };

    pub fn validate(&self) -> Result<(), PhysicsError> {
        if !(self.d_u > 0.0 && self.d_v > 0.0) {
            return Err(PhysicsError::InvalidParams(format!(
                "diffusivities must be positive, got D_u = {}, D_v = {}",
                self.d_u, self.d_v
            )));
        }
        if self.feed < 0.0 || self.kill < 0.0 {
            return Err(PhysicsError::InvalidParams(
                "feed and kill rates must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Both species on a shared periodic grid at time `t`.
#[derive(Debug, Clone)]
pub struct GrayScottState {
    pub u: ScalarField,
    pub v: ScalarField,
    pub t: f64,
}

impl GrayScottState {
    pub fn new(u: ScalarField, v: ScalarField, t: f64) -> Result<Self, PhysicsError> {
        if u.grid() != v.grid() {
            return Err(PhysicsError::GridMismatch(
                "u and v must share one grid".into(),
            ));
        }
        Ok(Self { u, v, t })
    }

    pub fn grid(&self) -> &Grid2D {
        self.u.grid()
    }
}

/// Indicator initial data: u = 1 on the radius-0.1 ball centered at
/// (1/2, 1/2), v the complement indicator.
pub fn gray_scott_initial_state(grid: &Grid2D) -> Result<GrayScottState, PhysicsError> {
    if grid.boundary != BoundaryKind::Periodic {
        return Err(PhysicsError::GridMismatch(
            "Gray-Scott runs on a periodic grid".into(),
        ));
    }
    if grid.x_min != 0.0 || grid.x_max != 1.0 || grid.y_min != 0.0 || grid.y_max != 1.0 {
        return Err(PhysicsError::GridMismatch(format!(
            "expected the unit square, got [{}, {}] x [{}, {}]",
            grid.x_min, grid.x_max, grid.y_min, grid.y_max
        )));
    }
    let u = ScalarField::from_fn(*grid, |x, y| {
        let r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
        if r2 <= 0.01 {
            1.0
        } else {
            0.0
        }
    })?;
    let v = ScalarField::from_fn(*grid, |x, y| {
        let r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
        if r2 <= 0.01 {
            0.0
        } else {
            1.0
        }
    })?;
    GrayScottState::new(u, v, 0.0)
}

#[inline]
fn stability_factor(params: &GrayScottParams, grid: &Grid2D, dt: f64) -> f64 {
    let hx = grid.hx();
    let hy = grid.hy();
    params.d_u.max(params.d_v) * dt * (2.0 / (hx * hx) + 2.0 / (hy * hy))
}

/// Periodic 5-point Laplacian of `src` into `out`.
fn periodic_laplacian(grid: &Grid2D, src: &[f64], out: &mut [f64]) {
    let (nx, ny) = (grid.nx, grid.ny);
    let ihx2 = 1.0 / (grid.hx() * grid.hx());
    let ihy2 = 1.0 / (grid.hy() * grid.hy());
    for iy in 0..ny {
        let yp = if iy == 0 { ny - 1 } else { iy - 1 };
        let yn = if iy == ny - 1 { 0 } else { iy + 1 };
        let row = iy * nx;
        let row_p = yp * nx;
        let row_n = yn * nx;
        for ix in 0..nx {
            let xp = if ix == 0 { nx - 1 } else { ix - 1 };
            let xn = if ix == nx - 1 { 0 } else { ix + 1 };
            let c = src[row + ix];
            out[row + ix] = (src[row + xp] - 2.0 * c + src[row + xn]) * ihx2
                + (src[row_p + ix] - 2.0 * c + src[row_n + ix]) * ihy2;
        }
    }
}

/// One forward-Euler step. Enforces the explicit diffusion stability bound
/// and rejects non-finite results.
pub fn gray_scott_step(
    state: &GrayScottState,
    params: &GrayScottParams,
    dt: f64,
) -> Result<GrayScottState, PhysicsError> {
    params.validate()?;
    if !(dt > 0.0) {
        return Err(PhysicsError::InvalidParams(format!("dt = {dt}")));
    }
    let grid = *state.grid();
    let factor = stability_factor(params, &grid, dt);
    if factor > 1.0 {
        return Err(PhysicsError::StabilityViolation(factor));
    }
    let n = grid.n_nodes();
    let u = state.u.values();
    let v = state.v.values();
    let mut lap_u = vec![0.0; n];
    let mut lap_v = vec![0.0; n];
    periodic_laplacian(&grid, u, &mut lap_u);
    periodic_laplacian(&grid, v, &mut lap_v);

    let (feed, kill) = (params.feed, params.kill);
    let mut un = Vec::with_capacity(n);
    let mut vn = Vec::with_capacity(n);
    for p in 0..n {
        let uv2 = u[p] * v[p] * v[p];
        un.push(u[p] + dt * (params.d_u * lap_u[p] - uv2 + feed * (1.0 - u[p])));
        vn.push(v[p] + dt * (params.d_v * lap_v[p] + uv2 - (feed + kill) * v[p]));
    }
    let t = state.t + dt;
    if !un.iter().chain(vn.iter()).all(|x| x.is_finite()) {
        return Err(PhysicsError::NonFiniteState(t));
    }
    Ok(GrayScottState {
        u: ScalarField::new(grid, un)?,
        v: ScalarField::new(grid, vn)?,
        t,
    })
}

/// Per-snapshot sensitivity fields d(u, v)/d(D_u, D_v).
#[derive(Debug, Clone)]
pub struct SnapshotSens {
    pub du_ddu: Vec<f64>,
    pub dv_ddu: Vec<f64>,
    pub du_ddv: Vec<f64>,
    pub dv_ddv: Vec<f64>,
}

/// Strided snapshots of a Gray-Scott run, optionally carrying the four
/// forward sensitivity fields alongside each snapshot.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: Grid2D,
    times: Vec<f64>,
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    sens: Option<Vec<SnapshotSens>>,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_snapshots(&self) -> usize {
        self.times.len()
    }

    pub fn has_sensitivities(&self) -> bool {
        self.sens.is_some()
    }

    pub fn snapshot_u(&self, s: usize) -> &[f64] {
        &self.u[s]
    }

    pub fn snapshot_v(&self, s: usize) -> &[f64] {
        &self.v[s]
    }

    pub fn snapshot_field(&self, s: usize, component: usize) -> Result<ScalarField, PhysicsError> {
        let values = if component == 0 { &self.u[s] } else { &self.v[s] };
        Ok(ScalarField::new(self.grid, values.clone())?)
    }

    /// All stored values in snapshot-major order, u then v per snapshot;
    /// the layout the normalized L2 trajectory error is computed on.
    pub fn stacked_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.grid.n_nodes() * self.times.len());
        for s in 0..self.times.len() {
            out.extend_from_slice(&self.u[s]);
            out.extend_from_slice(&self.v[s]);
        }
        out
    }

    fn locate_time(&self, t: f64) -> Result<(usize, usize, f64), CoreError> {
        let (t0, t1) = (self.times[0], *self.times.last().unwrap());
        if t < t0 || t > t1 {
            return Err(CoreError::TimeOutOfSpan {
                t,
                t_min: t0,
                t_max: t1,
            });
        }
        // First snapshot with time >= t.
        let hi = self.times.partition_point(|&s| s < t);
        if hi == 0 {
            return Ok((0, 0, 0.0));
        }
        let lo = hi - 1;
        if self.times[hi.min(self.times.len() - 1)] == t {
            let j = hi.min(self.times.len() - 1);
            return Ok((j, j, 0.0));
        }
        let w = (t - self.times[lo]) / (self.times[hi] - self.times[lo]);
        Ok((lo, hi, w))
    }

    /// (u, v) at scattered space-time points: bilinear in space, linear in
    /// time between adjacent snapshots.
    pub fn predict(&self, points: &[SpaceTimePoint]) -> Result<Vec<[f64; 2]>, PhysicsError> {
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            let (lo, hi, w) = self.locate_time(p.t)?;
            let u0 = interpolate_values(&self.grid, &self.u[lo], p.x, p.y)?;
            let v0 = interpolate_values(&self.grid, &self.v[lo], p.x, p.y)?;
            if lo == hi {
                out.push([u0, v0]);
            } else {
                let u1 = interpolate_values(&self.grid, &self.u[hi], p.x, p.y)?;
                let v1 = interpolate_values(&self.grid, &self.v[hi], p.x, p.y)?;
                out.push([u0 + w * (u1 - u0), v0 + w * (v1 - v0)]);
            }
        }
        Ok(out)
    }

    /// Predictions plus interpolated sensitivities.
    ///
    /// `sens[i][param][comp]` is d(component)/d(diffusivity): param 0 = D_u,
    /// param 1 = D_v; comp 0 = u, comp 1 = v.
    #[allow(clippy::type_complexity)]
    pub fn predict_with_sensitivities(
        &self,
        points: &[SpaceTimePoint],
    ) -> Result<(Vec<[f64; 2]>, Vec<[[f64; 2]; 2]>), PhysicsError> {
        let sens = self.sens.as_ref().ok_or_else(|| {
            PhysicsError::InvalidParams("trajectory was integrated without sensitivities".into())
        })?;
        let preds = self.predict(points)?;
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            let (lo, hi, w) = self.locate_time(p.t)?;
            let mut block = [[0.0; 2]; 2];
            for (pi, fields) in [
                (0usize, [&sens[lo].du_ddu, &sens[lo].dv_ddu]),
                (1usize, [&sens[lo].du_ddv, &sens[lo].dv_ddv]),
            ] {
                for (ci, f_lo) in fields.iter().enumerate() {
                    let s0 = interpolate_values(&self.grid, f_lo, p.x, p.y)?;
                    block[pi][ci] = s0;
                }
            }
            if lo != hi {
                for (pi, fields) in [
                    (0usize, [&sens[hi].du_ddu, &sens[hi].dv_ddu]),
                    (1usize, [&sens[hi].du_ddv, &sens[hi].dv_ddv]),
                ] {
                    for (ci, f_hi) in fields.iter().enumerate() {
                        let s1 = interpolate_values(&self.grid, f_hi, p.x, p.y)?;
                        block[pi][ci] += w * (s1 - block[pi][ci]);
                    }
                }
            }
            out.push(block);
        }
        Ok((preds, out))
    }
}

impl Evaluable for Trajectory {
    fn n_components(&self) -> usize {
        2
    }

    fn domain(&self) -> Region {
        Region::space_time(
            Rect::new(self.grid.x_min, self.grid.x_max, self.grid.y_min, self.grid.y_max),
            self.times[0],
            *self.times.last().unwrap(),
        )
    }

    fn eval(&self, p: &SpaceTimePoint) -> Result<Vec<f64>, CoreError> {
        match self.predict(std::slice::from_ref(p)) {
            Ok(v) => Ok(v[0].to_vec()),
            Err(PhysicsError::Core(e)) => Err(e),
            Err(e) => Err(CoreError::InvalidField(e.to_string())),
        }
    }
}

/// Integrates `n_steps` of forward Euler, storing every `snapshot_stride`-th
/// state (always including step 0 and the final step).
///
/// With `with_sensitivities` the four fields d(u, v)/d(D_u, D_v) are
/// co-integrated by differentiating the Euler update:
///
/// ```text
/// s_u' = s_u + dt [ lap(u) 1{lambda = D_u} + D_u lap(s_u) + R_uu s_u + R_uv s_v ]
/// s_v' = s_v + dt [ lap(v) 1{lambda = D_v} + D_v lap(s_v) + R_vu s_u + R_vv s_v ]
/// ```
pub fn simulate_gray_scott(
    params: &GrayScottParams,
    initial: &GrayScottState,
    n_steps: usize,
    dt: f64,
    snapshot_stride: usize,
    with_sensitivities: bool,
) -> Result<Trajectory, PhysicsError> {
    params.validate()?;
    if !(dt > 0.0) || snapshot_stride == 0 {
        return Err(PhysicsError::InvalidParams(format!(
            "dt = {dt}, snapshot_stride = {snapshot_stride}"
        )));
    }
    let grid = *initial.grid();
    if n_steps > 0 {
        let factor = stability_factor(params, &grid, dt);
        if factor > 1.0 {
            return Err(PhysicsError::StabilityViolation(factor));
        }
    }
    let n = grid.n_nodes();
    let mut u = initial.u.values().to_vec();
    let mut v = initial.v.values().to_vec();
    // Sensitivities of the (known) initial data vanish.
    let mut s = if with_sensitivities {
        Some([vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]])
    } else {
        None
    };

    let mut traj = Trajectory {
        grid,
        times: vec![initial.t],
        u: vec![u.clone()],
        v: vec![v.clone()],
        sens: with_sensitivities.then(Vec::new),
    };
    if let (Some(list), Some(s)) = (traj.sens.as_mut(), s.as_ref()) {
        list.push(SnapshotSens {
            du_ddu: s[0].clone(),
            dv_ddu: s[1].clone(),
            du_ddv: s[2].clone(),
            dv_ddv: s[3].clone(),
        });
    }

    let mut lap_u = vec![0.0; n];
    let mut lap_v = vec![0.0; n];
    let mut lap_s = vec![0.0; n];
    let (feed, kill) = (params.feed, params.kill);

    for step in 1..=n_steps {
        periodic_laplacian(&grid, &u, &mut lap_u);
        periodic_laplacian(&grid, &v, &mut lap_v);

        if let Some(s) = s.as_mut() {
            // Sensitivities first: the Jacobian is evaluated at the current
            // state, before u and v advance.
            let forcing = [Some(&lap_u), None, None, Some(&lap_v)];
            let diffusivity = [params.d_u, params.d_v, params.d_u, params.d_v];
            // Pair (s_u, s_v) per parameter: indices (0, 1) and (2, 3).
            for pair in 0..2 {
                let (iu, iv) = (2 * pair, 2 * pair + 1);
                // s_u update.
                periodic_laplacian(&grid, &s[iu], &mut lap_s);
                let mut su_next = Vec::with_capacity(n);
                for p in 0..n {
                    let r_uu = -v[p] * v[p] - feed;
                    let r_uv = -2.0 * u[p] * v[p];
                    let drive = forcing[iu].map_or(0.0, |f| f[p]);
                    su_next.push(
                        s[iu][p]
                            + dt * (drive
                                + diffusivity[iu] * lap_s[p]
                                + r_uu * s[iu][p]
                                + r_uv * s[iv][p]),
                    );
                }
                // s_v update.
                periodic_laplacian(&grid, &s[iv], &mut lap_s);
                let mut sv_next = Vec::with_capacity(n);
                for p in 0..n {
                    let r_vu = v[p] * v[p];
                    let r_vv = 2.0 * u[p] * v[p] - (feed + kill);
                    let drive = forcing[iv].map_or(0.0, |f| f[p]);
                    sv_next.push(
                        s[iv][p]
                            + dt * (drive
                                + diffusivity[iv] * lap_s[p]
                                + r_vu * s[iu][p]
                                + r_vv * s[iv][p]),
                    );
                }
                s[iu] = su_next;
                s[iv] = sv_next;
            }
        }

        for p in 0..n {
            let uv2 = u[p] * v[p] * v[p];
            let du = params.d_u * lap_u[p] - uv2 + feed * (1.0 - u[p]);
            let dv = params.d_v * lap_v[p] + uv2 - (feed + kill) * v[p];
            u[p] += dt * du;
            v[p] += dt * dv;
        }
        let t = initial.t + step as f64 * dt;
        if !u.iter().chain(v.iter()).all(|x| x.is_finite()) {
            return Err(PhysicsError::NonFiniteState(t));
        }

        if step % snapshot_stride == 0 || step == n_steps {
            traj.times.push(t);
            traj.u.push(u.clone());
            traj.v.push(v.clone());
            if let (Some(list), Some(s)) = (traj.sens.as_mut(), s.as_ref()) {
                if !s.iter().flatten().all(|x| x.is_finite()) {
                    return Err(PhysicsError::NonFiniteState(t));
                }
                list.push(SnapshotSens {
                    du_ddu: s[0].clone(),
                    dv_ddu: s[1].clone(),
                    du_ddv: s[2].clone(),
                    dv_ddv: s[3].clone(),
                });
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid(n: usize) -> Grid2D {
        Grid2D::new(n, n, 0.0, 1.0, 0.0, 1.0, BoundaryKind::Periodic).unwrap()
    }

    #[test]
    fn initial_state_partitions_the_domain() {
        let grid = unit_grid(32);
        let st = gray_scott_initial_state(&grid).unwrap();
        // Center node in the ball, corner node outside.
        assert_eq!(st.u.at(16, 16), 1.0);
        assert_eq!(st.v.at(16, 16), 0.0);
        assert_eq!(st.u.at(0, 0), 0.0);
        assert_eq!(st.v.at(0, 0), 1.0);
        let total: f64 = st
            .u
            .values()
            .iter()
            .zip(st.v.values())
            .map(|(a, b)| a + b)
            .sum();
        assert_eq!(total, grid.n_nodes() as f64);
    }

    #[test]
    fn uniform_one_zero_is_a_fixed_point() {
        let grid = unit_grid(16);
        let u = ScalarField::from_fn(grid, |_, _| 1.0).unwrap();
        let v = ScalarField::zeros(grid);
        let st = GrayScottState::new(u, v, 0.0).unwrap();
        let next = gray_scott_step(&st, &GrayScottParams::GROUND_TRUTH, 0.4).unwrap();
        assert_eq!(next.u.values(), st.u.values());
        assert_eq!(next.v.values(), st.v.values());
    }

    #[test]
    fn spatially_uniform_state_matches_scalar_ode_oracle() {
        // With a uniform state the Laplacian vanishes and each node follows
        // the two-species ODE exactly.
        let grid = unit_grid(8);
        let params = GrayScottParams::GROUND_TRUTH;
        let (mut ou, mut ov) = (0.3f64, 0.7f64);
        let dt = 0.4;
        let u = ScalarField::from_fn(grid, |_, _| ou).unwrap();
        let v = ScalarField::from_fn(grid, |_, _| ov).unwrap();
        let mut st = GrayScottState::new(u, v, 0.0).unwrap();
        for _ in 0..50 {
            st = gray_scott_step(&st, &params, dt).unwrap();
            let uv2 = ou * ov * ov;
            let du = -uv2 + params.feed * (1.0 - ou);
            let dv = uv2 - (params.feed + params.kill) * ov;
            ou += dt * du;
            ov += dt * dv;
        }
        for p in 0..grid.n_nodes() {
            assert!((st.u.values()[p] - ou).abs() < 1e-13);
            assert!((st.v.values()[p] - ov).abs() < 1e-13);
        }
    }

    #[test]
    fn d4_symmetry_is_preserved() {
        let grid = unit_grid(16);
        let st = gray_scott_initial_state(&grid).unwrap();
        let traj =
            simulate_gray_scott(&GrayScottParams::GROUND_TRUTH, &st, 100, 0.4, 100, false)
                .unwrap();
        let n = 16usize;
        let last = traj.snapshot_u(traj.n_snapshots() - 1);
        // The indicator data is symmetric under the dihedral group fixing
        // (1/2, 1/2); nodes map as i -> n - i (mod n) about the center node 8.
        for iy in 0..n {
            for ix in 0..n {
                let mx = (n - ix) % n;
                let my = (n - iy) % n;
                let a = last[iy * n + ix];
                assert!((a - last[iy * n + mx]).abs() < 1e-12);
                assert!((a - last[my * n + ix]).abs() < 1e-12);
                assert!((a - last[ix * n + iy]).abs() < 1e-12); // transpose
            }
        }
    }

    #[test]
    fn stability_violation_rejected() {
        let grid = unit_grid(64);
        let st = gray_scott_initial_state(&grid).unwrap();
        let params = GrayScottParams {
            d_u: 1e-2,
            d_v: 1e-2,
            ..GrayScottParams::GROUND_TRUTH
        };
        // 1e-2 * 0.4 * (2 + 2) * 4096 > 1.
        assert!(matches!(
            gray_scott_step(&st, &params, 0.4),
            Err(PhysicsError::StabilityViolation(_))
        ));
    }

    #[test]
    fn zero_steps_yields_initial_snapshot_only() {
        let grid = unit_grid(8);
        let st = gray_scott_initial_state(&grid).unwrap();
        let traj =
            simulate_gray_scott(&GrayScottParams::GROUND_TRUTH, &st, 0, 0.4, 5, false).unwrap();
        assert_eq!(traj.n_snapshots(), 1);
        assert_eq!(traj.times(), &[0.0]);
        assert_eq!(traj.snapshot_u(0), st.u.values());
    }

    #[test]
    fn predict_reproduces_stored_values_and_time_midpoints() {
        let grid = unit_grid(8);
        let st = gray_scott_initial_state(&grid).unwrap();
        let traj =
            simulate_gray_scott(&GrayScottParams::GROUND_TRUTH, &st, 10, 0.5, 5, false).unwrap();
        // Snapshot times 0, 2.5, 5.0. Node (2, 3):
        let p = SpaceTimePoint::new(grid.x(2), grid.y(3), 2.5);
        let got = traj.predict(&[p]).unwrap()[0];
        assert_eq!(got[0], traj.snapshot_u(1)[3 * 8 + 2]);
        assert_eq!(got[1], traj.snapshot_v(1)[3 * 8 + 2]);
        // Midway between snapshots at a node: arithmetic mean of the two.
        let pm = SpaceTimePoint::new(grid.x(2), grid.y(3), 1.25);
        let got = traj.predict(&[pm]).unwrap()[0];
        let expect = 0.5 * (traj.snapshot_u(0)[3 * 8 + 2] + traj.snapshot_u(1)[3 * 8 + 2]);
        assert!((got[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn strided_prediction_tracks_dense_snapshots() {
        // Dense-stride oracle: a stride-10 trajectory interpolates within the
        // stride truncation error of the stride-1 run on a smooth stretch.
        let grid = unit_grid(8);
        let st = gray_scott_initial_state(&grid).unwrap();
        let params = GrayScottParams::GROUND_TRUTH;
        let dense = simulate_gray_scott(&params, &st, 100, 0.4, 1, false).unwrap();
        let coarse = simulate_gray_scott(&params, &st, 100, 0.4, 10, false).unwrap();
        let points: Vec<SpaceTimePoint> = (0..50)
            .map(|i| {
                let s = i as f64 / 50.0;
                SpaceTimePoint::new(s, (1.0 - s) * 0.9, 40.0 * s)
            })
            .collect();
        let a = dense.predict(&points).unwrap();
        let b = coarse.predict(&points).unwrap();
        let max_dev = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x[0] - y[0]).abs().max((x[1] - y[1]).abs()))
            .fold(0.0, f64::max);
        // Second difference of the trajectory bounds the linear-in-time
        // interpolation error over one stride.
        let mut curvature = 0.0f64;
        for s in 1..dense.n_snapshots() - 1 {
            for p in 0..grid.n_nodes() {
                let d2u = (dense.snapshot_u(s + 1)[p] - 2.0 * dense.snapshot_u(s)[p]
                    + dense.snapshot_u(s - 1)[p])
                    .abs();
                let d2v = (dense.snapshot_v(s + 1)[p] - 2.0 * dense.snapshot_v(s)[p]
                    + dense.snapshot_v(s - 1)[p])
                    .abs();
                curvature = curvature.max(d2u).max(d2v);
            }
        }
        let bound = curvature * (10.0f64 / 2.0).powi(2) + 1e-12;
        assert!(
            max_dev <= bound,
            "stride interpolation deviation {max_dev} above estimate {bound}"
        );
    }

    #[test]
    fn time_outside_span_errors() {
        let grid = unit_grid(8);
        let st = gray_scott_initial_state(&grid).unwrap();
        let traj =
            simulate_gray_scott(&GrayScottParams::GROUND_TRUTH, &st, 4, 0.4, 2, false).unwrap();
        let p = SpaceTimePoint::new(0.5, 0.5, 2.0);
        assert!(matches!(
            traj.predict(&[p]),
            Err(PhysicsError::Core(CoreError::TimeOutOfSpan { .. }))
        ));
    }
}
