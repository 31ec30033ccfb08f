//! Trajectory block: one convexified step for the UAV waypoints.
//!
//! With powers fixed, the per-slot objective is
//!
//! ```text
//! log2(1 + c l/(J + l)) - log2(1 + e m/(J + m))
//! l = |q - w_D|^2 + H^2,  m = |q - w_E|^2 + H^2,  J = gamma0 P_U
//! ```
//!
//! Both terms are concave increasing in their distance argument, so the
//! surrogate at anchor `q^k`
//!
//! - replaces `-|q - w_D|^2` inside `l` by its tangent plane `G^k(q)` (an upper
//!   bound, hence `l` by a lower bound), and
//! - replaces the eavesdropper term by its tangent in `m` (an upper bound).
//!
//! The result is concave in `q` and is maximized over the mobility constraints
//! with a log-barrier Newton method. Consecutive waypoints only interact
//! through one barrier term, so every Newton system is block tridiagonal with
//! 2x2 blocks and is solved in `O(N)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{ground_gain_mean, jensen_factor};
use crate::math::{self, LN_2};
use crate::model::{check_trajectory, PowerSchedule, Scenario, Trajectory, Vec2};
use crate::{Error, Result};

/// `constant + gradient . q`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineForm {
    pub constant: f64,
    pub gradient: Vec2,
}

impl AffineForm {
    #[inline]
    pub fn eval(&self, q: Vec2) -> f64 {
        self.constant + self.gradient.dot(q)
    }
}

/// Per-slot coefficients of the trajectory step, linearized at `q^k`.
///
/// `m_anchor` includes the `H^2` term so that the eavesdropper tangent is
/// taken at the true value of `m` at the anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct P7Coefficients {
    pub c: Vec<f64>,
    pub e: Vec<f64>,
    /// `gamma0 * P_U[n]`.
    pub jam: Vec<f64>,
    /// Slope `C^k[n]` of the eavesdropper tangent.
    pub c_lin: Vec<f64>,
    /// `m^k[n] = |q^k[n] - w_E|^2 + H^2`.
    pub m_anchor: Vec<f64>,
    /// Eavesdropper term at the anchor, `F^k[n]`.
    pub f_anchor: Vec<f64>,
    /// Tangent plane `G^k[n]` of `-|q - w_D|^2` at `q^k[n]`.
    pub g_affine: Vec<AffineForm>,
    pub altitude_sq: f64,
    pub wd: Vec2,
    pub we: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySolution {
    pub trajectory: Trajectory,
    /// Surrogate objective (sum over slots) at `trajectory`.
    pub objective: f64,
    /// Barrier duality gap bound on the surrogate objective.
    pub duality_gap: f64,
    /// A line search was cut short to keep the linearized `l[n]` above `H^2/100`.
    pub trust_clamped: bool,
    /// True when the anchor was kept because no strict improvement was found.
    pub kept_anchor: bool,
}

/// `log2(1 + c x/(J + x))`, the rate bound expressed through its distance term.
#[inline]
fn rate_of(c: f64, jam: f64, x: f64) -> f64 {
    math::log2_1p(c * x / (jam + x))
}

/// First and second derivative of [`rate_of`] in `x`.
#[inline]
fn rate_derivs(c: f64, jam: f64, x: f64) -> (f64, f64) {
    let u = jam + (1.0 + c) * x;
    let v = jam + x;
    let d1 = c * jam / (LN_2 * u * v);
    let d2 = -c * jam * ((1.0 + c) * v + u) / (LN_2 * u * u * v * v);
    (d1, d2)
}

/// Tangent `(C, F)` of `log2(1 + e m/(J + m))` at `m = m_anchor`.
pub fn eve_tangent(e: f64, jam: f64, m_anchor: f64) -> (f64, f64) {
    let slope = e * jam / (LN_2 * (m_anchor + jam) * ((e + 1.0) * m_anchor + jam));
    (slope, rate_of(e, jam, m_anchor))
}

pub fn p7_coefficients(s: &Scenario, q_k: &Trajectory, p: &PowerSchedule) -> Result<P7Coefficients> {
    let n = s.n_slots();
    for (what, len) in [("trajectory", q_k.len()), ("source power", p.p_s.len()), ("UAV power", p.p_u.len())] {
        if len != n {
            return Err(Error::LengthMismatch { what, expected: n, found: len });
        }
    }
    let h2 = s.altitude() * s.altitude();
    let (wd, we) = (s.wd(), s.we());
    let c0 = jensen_factor() * ground_gain_mean(s, wd);
    let e0 = ground_gain_mean(s, we);
    let mut coef = P7Coefficients {
        c: Vec::with_capacity(n),
        e: Vec::with_capacity(n),
        jam: Vec::with_capacity(n),
        c_lin: Vec::with_capacity(n),
        m_anchor: Vec::with_capacity(n),
        f_anchor: Vec::with_capacity(n),
        g_affine: Vec::with_capacity(n),
        altitude_sq: h2,
        wd,
        we,
    };
    for ((&qk, &ps), &pu) in q_k.points().iter().zip(&p.p_s).zip(&p.p_u) {
        let (e, jam) = (e0 * ps, s.gamma0() * pu);
        let m = (qk - we).norm_sq() + h2;
        let (slope, value) = eve_tangent(e, jam, m);
        coef.c.push(c0 * ps);
        coef.e.push(e);
        coef.jam.push(jam);
        coef.c_lin.push(slope);
        coef.m_anchor.push(m);
        coef.f_anchor.push(value);
        coef.g_affine.push(AffineForm { constant: qk.norm_sq() - wd.norm_sq(), gradient: (qk - wd) * -2.0 });
    }
    Ok(coef)
}

impl P7Coefficients {
    fn len(&self) -> usize {
        self.c.len()
    }

    /// Linearized `l[n]` at `q`, i.e. `H^2 - G^k[n](q)`.
    #[inline]
    pub fn l_lin(&self, n: usize, q: Vec2) -> f64 {
        self.altitude_sq - self.g_affine[n].eval(q)
    }

    /// Surrogate value of slot `n` at `q`, constants included so that it
    /// equals the exact slot value at the anchor.
    #[inline]
    pub fn slot_surrogate(&self, n: usize, q: Vec2) -> f64 {
        let m = (q - self.we).norm_sq() + self.altitude_sq;
        rate_of(self.c[n], self.jam[n], self.l_lin(n, q)) - (self.c_lin[n] * (m - self.m_anchor[n]) + self.f_anchor[n])
    }

    /// Exact slot value at `q` (distances not linearized).
    #[inline]
    pub fn slot_exact(&self, n: usize, q: Vec2) -> f64 {
        let l = (q - self.wd).norm_sq() + self.altitude_sq;
        let m = (q - self.we).norm_sq() + self.altitude_sq;
        rate_of(self.c[n], self.jam[n], l) - rate_of(self.e[n], self.jam[n], m)
    }
}

/// Sum of the linearized slot objectives.
pub fn p7_objective(coef: &P7Coefficients, t: &Trajectory) -> f64 {
    t.points().iter().enumerate().map(|(n, &q)| coef.slot_surrogate(n, q)).sum()
}

/// Sum of the exact slot objectives for the fixed powers in `coef`.
pub fn p6_objective(coef: &P7Coefficients, t: &Trajectory) -> f64 {
    t.points().iter().enumerate().map(|(n, &q)| coef.slot_exact(n, q)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Mat2 {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Mat2 {
    const ZERO: Mat2 = Mat2 { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };

    fn scaled_identity(k: f64) -> Self {
        Mat2 { a: k, b: 0.0, c: 0.0, d: k }
    }

    fn outer(u: Vec2, v: Vec2) -> Self {
        Mat2 { a: u.x * v.x, b: u.x * v.y, c: u.y * v.x, d: u.y * v.y }
    }

    fn add(self, o: Mat2) -> Mat2 {
        Mat2 { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }

    fn sub(self, o: Mat2) -> Mat2 {
        Mat2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c, d: self.d - o.d }
    }

    fn scale(self, k: f64) -> Mat2 {
        Mat2 { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    fn transpose(self) -> Mat2 {
        Mat2 { a: self.a, b: self.c, c: self.b, d: self.d }
    }

    fn inverse(self) -> Mat2 {
        let det = self.a * self.d - self.b * self.c;
        Mat2 { a: self.d / det, b: -self.b / det, c: -self.c / det, d: self.a / det }
    }
}

/// Solves `H x = r` for symmetric block-tridiagonal `H` with diagonal blocks
/// `diag` and super-diagonal blocks `upper` (`upper[i]` couples `i` and `i+1`).
fn solve_block_tridiagonal(diag: &[Mat2], upper: &[Mat2], rhs: &[Vec2]) -> Vec<Vec2> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut r = rhs.to_vec();
    for i in 1..n {
        let w = upper[i - 1].transpose().mul(d[i - 1].inverse());
        d[i] = d[i].sub(w.mul(upper[i - 1]));
        r[i] = r[i] - w.apply(r[i - 1]);
    }
    let mut x = vec![Vec2::ZERO; n];
    x[n - 1] = d[n - 1].inverse().apply(r[n - 1]);
    for i in (0..n - 1).rev() {
        x[i] = d[i].inverse().apply(r[i] - upper[i].apply(x[i + 1]));
    }
    x
}

/// Log-barrier solver state for one trajectory step.
struct Barrier<'a> {
    coef: &'a P7Coefficients,
    q0: Vec2,
    qf: Vec2,
    step_sq: f64,
    l_floor: f64,
}

impl Barrier<'_> {
    fn point(&self, x: &[Vec2], i: isize) -> Vec2 {
        if i < 0 {
            self.q0
        } else if i as usize >= x.len() {
            self.qf
        } else {
            x[i as usize]
        }
    }

    /// Slacks `L^2 - |step|^2` of the `x.len() + 1` mobility constraints.
    fn slacks(&self, x: &[Vec2]) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(x.len() + 1);
        for j in 0..=x.len() as isize {
            let f = self.step_sq - (self.point(x, j) - self.point(x, j - 1)).norm_sq();
            if f.is_nan() || f <= 0.0 {
                return None;
            }
            out.push(f);
        }
        Some(out)
    }

    fn in_trust_region(&self, x: &[Vec2]) -> bool {
        x.iter().enumerate().all(|(n, &q)| self.coef.l_lin(n, q) >= self.l_floor)
    }

    /// Surrogate objective over the free waypoints plus the pinned final one.
    fn objective(&self, x: &[Vec2]) -> f64 {
        let last = self.coef.len() - 1;
        x.iter().enumerate().map(|(n, &q)| self.coef.slot_surrogate(n, q)).sum::<f64>()
            + self.coef.slot_surrogate(last, self.qf)
    }

    /// `t * (-objective) - sum ln(slack)`, or `None` outside the domain.
    fn merit(&self, t: f64, x: &[Vec2]) -> Option<f64> {
        let slacks = self.slacks(x)?;
        if !self.in_trust_region(x) {
            return None;
        }
        Some(-t * self.objective(x) - slacks.iter().map(|&f| math::ln(f)).sum::<f64>())
    }

    /// Gradient and block-tridiagonal Hessian of the merit function.
    fn derivatives(&self, t: f64, x: &[Vec2], slacks: &[f64]) -> (Vec<Vec2>, Vec<Mat2>, Vec<Mat2>) {
        let n = x.len();
        let coef = self.coef;
        let mut grad = vec![Vec2::ZERO; n];
        let mut diag = vec![Mat2::ZERO; n];
        let mut upper = vec![Mat2::ZERO; n.saturating_sub(1)];

        for (i, &q) in x.iter().enumerate() {
            let l = coef.l_lin(i, q);
            let (d1, d2) = rate_derivs(coef.c[i], coef.jam[i], l);
            let dl = coef.g_affine[i].gradient * -1.0;
            let c_lin = coef.c_lin[i];
            let g = dl * d1 - (q - coef.we) * (2.0 * c_lin);
            grad[i] = g * -t;
            // -hessian of the slot objective: -d2 dl dl^T + 2 C I (positive semidefinite)
            diag[i] = Mat2::outer(dl, dl).scale(-d2 * t).add(Mat2::scaled_identity(2.0 * c_lin * t));
        }

        for (j, &f) in slacks.iter().enumerate() {
            let j = j as isize;
            let delta = self.point(x, j) - self.point(x, j - 1);
            let g = delta * (2.0 / f);
            let h = Mat2::scaled_identity(2.0 / f).add(Mat2::outer(delta, delta).scale(4.0 / (f * f)));
            // constraint j couples waypoint j-1 (tail) and waypoint j (head)
            if (j as usize) < n {
                grad[j as usize] = grad[j as usize] + g;
                diag[j as usize] = diag[j as usize].add(h);
            }
            if j >= 1 {
                let tail = (j - 1) as usize;
                grad[tail] = grad[tail] - g;
                diag[tail] = diag[tail].add(h);
                if (j as usize) < n {
                    upper[tail] = upper[tail].sub(h);
                }
            }
        }
        (grad, diag, upper)
    }
}

const MU: f64 = 20.0;
const NEWTON_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 200;
const MAX_OUTER: usize = 60;

/// Maximizes the linearized trajectory objective over the mobility set.
///
/// The anchor is returned unchanged unless the barrier solution improves the
/// surrogate strictly, which keeps the exact objective non-decreasing.
pub fn solve_p7(s: &Scenario, coef: &P7Coefficients, q_k: &Trajectory) -> Result<TrajectorySolution> {
    let verdict = check_trajectory(s, q_k)?;
    if !verdict.is_feasible() {
        return Err(Error::InfeasibleTrajectory { worst: verdict.worst() });
    }
    if coef.len() != s.n_slots() {
        return Err(Error::LengthMismatch {
            what: "trajectory coefficients",
            expected: s.n_slots(),
            found: coef.len(),
        });
    }
    let n = s.n_slots();
    let anchor_value = p7_objective(coef, q_k);

    if n == 1 || s.is_minimum_time() {
        // a single feasible trajectory
        let line = Trajectory::straight_line(s);
        return Ok(TrajectorySolution {
            objective: p7_objective(coef, &line),
            trajectory: line,
            duality_gap: 0.0,
            trust_clamped: false,
            kept_anchor: false,
        });
    }

    let l = s.step_max();
    let barrier = Barrier { coef, q0: s.q0(), qf: s.qf(), step_sq: l * l, l_floor: coef.altitude_sq / 100.0 };

    // strictly feasible start: pull the anchor slightly toward the straight line
    let line = Trajectory::straight_line(s);
    let mut x: Vec<Vec2> = q_k.points()[..n - 1].to_vec();
    let mut theta = 0.0;
    while barrier.slacks(&x).is_none_or(|f| f.iter().any(|&v| v < 1e-9 * l * l)) {
        theta = if theta == 0.0 { 1e-3 } else { theta * 4.0 };
        if theta >= 1.0 {
            x = line.points()[..n - 1].to_vec();
            break;
        }
        x = q_k.points()[..n - 1].iter().zip(line.points()).map(|(&a, &b)| a * (1.0 - theta) + b * theta).collect();
    }

    let m_constraints = n as f64;
    let gap_target = 1e-10 * f64::max(1.0, anchor_value.abs());
    let mut t = m_constraints / f64::max(0.1 * anchor_value.abs(), 1e-3);
    let mut trust_clamped = false;

    for _ in 0..MAX_OUTER {
        for _ in 0..MAX_NEWTON {
            let slacks = barrier.slacks(&x).expect("iterate left the barrier domain");
            let (grad, diag, upper) = barrier.derivatives(t, &x, &slacks);
            let neg: Vec<Vec2> = grad.iter().map(|&g| g * -1.0).collect();
            let dir = solve_block_tridiagonal(&diag, &upper, &neg);
            let decrement_sq: f64 = grad.iter().zip(&dir).map(|(g, d)| -g.dot(*d)).sum();
            if !(decrement_sq.is_finite()) || decrement_sq / 2.0 <= NEWTON_TOL {
                break;
            }
            let current = barrier.merit(t, &x).expect("iterate left the barrier domain");
            let mut step = 1.0;
            let mut accepted = false;
            while step > 1e-20 {
                let trial: Vec<Vec2> = x.iter().zip(&dir).map(|(&a, &d)| a + d * step).collect();
                if barrier.slacks(&trial).is_some() && !barrier.in_trust_region(&trial) {
                    trust_clamped = true;
                }
                if let Some(value) = barrier.merit(t, &trial) {
                    if value <= current - 0.25 * step * decrement_sq {
                        x = trial;
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if m_constraints / t < gap_target {
            break;
        }
        t *= MU;
    }

    let mut points = x;
    points.push(s.qf());
    let candidate = Trajectory::new(points);
    let value = p7_objective(coef, &candidate);
    let duality_gap = m_constraints / t;
    let feasible = check_trajectory(s, &candidate)?.is_feasible();
    if feasible && value > anchor_value + 1e-12 * f64::max(1.0, anchor_value.abs()) {
        Ok(TrajectorySolution {
            trajectory: candidate,
            objective: value,
            duality_gap,
            trust_clamped,
            kept_anchor: false,
        })
    } else {
        Ok(TrajectorySolution {
            trajectory: q_k.clone(),
            objective: anchor_value,
            duality_gap,
            trust_clamped,
            kept_anchor: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Discretization, ScenarioParams};
    use proptest::prelude::*;

    fn reference(period: f64) -> Scenario {
        ScenarioParams::reference(period).build().unwrap()
    }

    #[test]
    fn tangent_plane_is_tight_at_anchor() {
        let s = reference(300.0);
        let t = Trajectory::straight_line(&s);
        let coef = p7_coefficients(&s, &t, &PowerSchedule::uniform_average(&s)).unwrap();
        for (n, &q) in t.points().iter().enumerate() {
            let g = coef.g_affine[n].eval(q);
            assert!((g + (q - s.wd()).norm_sq()).abs() <= 1e-9 * (q - s.wd()).norm_sq());
            assert!((coef.slot_surrogate(n, q) - coef.slot_exact(n, q)).abs() < 1e-14);
        }
    }

    #[test]
    fn no_jamming_means_no_eavesdropper_slope() {
        let s = reference(300.0);
        let t = Trajectory::straight_line(&s);
        let mut p = PowerSchedule::uniform_average(&s);
        p.p_u.iter_mut().for_each(|x| *x = 0.0);
        let coef = p7_coefficients(&s, &t, &p).unwrap();
        assert!(coef.c_lin.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn eve_tangent_example() {
        let (c, f) = eve_tangent(1.0, 1.0, 1.0);
        assert!((c - 0.240_449_173_481_493_9).abs() < 1e-15);
        assert!((f - math::log2_1p(0.5)).abs() < 1e-15);
    }

    #[test]
    fn rate_derivatives_match_finite_differences() {
        for &(c, jam, x) in &[(1.0, 1.0, 1.0), (0.03, 1e7, 4e4), (12.0, 5e6, 1.1e4)] {
            let h = 1e-4 * x;
            let (d1, d2) = rate_derivs(c, jam, x);
            let fd1 = (rate_of(c, jam, x + h) - rate_of(c, jam, x - h)) / (2.0 * h);
            let fd2 = (rate_of(c, jam, x + h) - 2.0 * rate_of(c, jam, x) + rate_of(c, jam, x - h)) / (h * h);
            assert!((d1 - fd1).abs() <= 1e-6 * d1.abs(), "{d1} {fd1}");
            assert!((d2 - fd2).abs() <= 1e-3 * d2.abs(), "{d2} {fd2}");
        }
    }

    #[test]
    fn block_solver_matches_dense_elimination() {
        let diag = [
            Mat2 { a: 4.0, b: 1.0, c: 1.0, d: 3.0 },
            Mat2 { a: 5.0, b: 0.5, c: 0.5, d: 6.0 },
            Mat2 { a: 3.0, b: -1.0, c: -1.0, d: 4.0 },
        ];
        let upper = [Mat2 { a: -1.0, b: 0.2, c: 0.3, d: -1.0 }, Mat2 { a: 0.5, b: 0.0, c: -0.4, d: -1.5 }];
        let rhs = [Vec2::new(1.0, 2.0), Vec2::new(-1.0, 0.5), Vec2::new(3.0, -2.0)];
        let x = solve_block_tridiagonal(&diag, &upper, &rhs);
        // multiply back
        for i in 0..3 {
            let mut r = diag[i].apply(x[i]);
            if i + 1 < 3 {
                r = r + upper[i].apply(x[i + 1]);
            }
            if i >= 1 {
                r = r + upper[i - 1].transpose().apply(x[i - 1]);
            }
            assert!((r - rhs[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn pinned_single_slot() {
        let mut p = ScenarioParams::reference(10.0);
        p.discretization = Discretization::SlotCount(1);
        p.q0 = Vec2::new(42.0, -7.0);
        p.qf = p.q0;
        let s = p.build().unwrap();
        let q_k = Trajectory::new(vec![s.qf()]);
        let coef = p7_coefficients(&s, &q_k, &PowerSchedule::uniform_average(&s)).unwrap();
        let sol = solve_p7(&s, &coef, &q_k).unwrap();
        assert_eq!(sol.trajectory, q_k);
    }

    #[test]
    fn degenerate_objective_keeps_anchor() {
        let s = reference(300.0);
        let crate_line = Trajectory::straight_line(&s);
        let mut p = PowerSchedule::uniform_average(&s);
        p.p_u.iter_mut().for_each(|x| *x = 0.0);
        let coef = p7_coefficients(&s, &crate_line, &p).unwrap();
        let sol = solve_p7(&s, &coef, &crate_line).unwrap();
        assert!(sol.kept_anchor);
        assert_eq!(sol.trajectory, crate_line);
    }

    #[test]
    fn minimum_time_returns_the_straight_line() {
        let s = reference(200.0);
        let line = Trajectory::straight_line(&s);
        let coef = p7_coefficients(&s, &line, &PowerSchedule::uniform_average(&s)).unwrap();
        let sol = solve_p7(&s, &coef, &line).unwrap();
        assert_eq!(sol.trajectory, line);
    }

    #[test]
    fn infeasible_anchor_is_rejected() {
        let s = reference(300.0);
        let bad = Trajectory::new(vec![Vec2::ZERO; s.n_slots()]);
        let coef = p7_coefficients(&s, &bad, &PowerSchedule::uniform_average(&s)).unwrap();
        assert!(matches!(solve_p7(&s, &coef, &bad), Err(Error::InfeasibleTrajectory { .. })));
    }

    #[test]
    fn step_improves_exact_objective_and_stays_feasible() {
        let s = reference(300.0);
        let line = Trajectory::straight_line(&s);
        let p = PowerSchedule::uniform_average(&s);
        let coef = p7_coefficients(&s, &line, &p).unwrap();
        let sol = solve_p7(&s, &coef, &line).unwrap();
        assert!(check_trajectory(&s, &sol.trajectory).unwrap().is_feasible());
        assert!(!sol.kept_anchor);
        assert!(p6_objective(&coef, &sol.trajectory) > p6_objective(&coef, &line));
        assert!(sol.duality_gap < 1e-6);
    }

    proptest! {
        #[test]
        fn tangent_plane_over_estimates(qx in -500.0f64..900.0, qy in -500.0f64..600.0,
                                        kx in -500.0f64..900.0, ky in -500.0f64..600.0) {
            let s = reference(300.0);
            let q = Vec2::new(qx, qy);
            let qk = Vec2::new(kx, ky);
            let t = Trajectory::new(vec![qk; s.n_slots()]);
            let coef = p7_coefficients(&s, &t, &PowerSchedule::uniform_average(&s)).unwrap();
            let g = coef.g_affine[0].eval(q);
            let exact = -(q - s.wd()).norm_sq();
            prop_assert!(exact <= g + 1e-9 * exact.abs().max(1.0));
            // gap equals |q - q^k|^2
            prop_assert!((g - exact - (q - qk).norm_sq()).abs() <= 1e-7 * exact.abs().max(1.0));
        }

        #[test]
        fn eve_tangent_over_estimates(e in 0.0f64..100.0, jam in 0.0f64..1e8, mk in 1e4f64..1e6, m in 1e4f64..1e6) {
            let (c, f) = eve_tangent(e, jam, mk);
            prop_assert!(c >= 0.0);
            let exact = rate_of(e, jam, m);
            prop_assert!(exact <= c * (m - mk) + f + 1e-12 * exact.abs().max(1.0));
        }
    }
}
