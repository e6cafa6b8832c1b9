//! Fixed-step classical Runge-Kutta shared by the Gaussian path and the
//! Fock-space oracle, so both see the same time discretization.

use crate::error::{Error, Result};

/// Vector-space operations the integrator needs.
pub trait OdeState: Sized {
    /// `self + s * other`
    fn add_scaled(&self, s: f64, other: &Self) -> Self;
}

/// One RK4 step of `dy/dt = f(y)` for an autonomous right-hand side.
pub fn step<S, F>(y: &S, h: f64, f: &F) -> S
where
    S: OdeState,
    F: Fn(&S) -> S,
{
    let k1 = f(y);
    let k2 = f(&y.add_scaled(h / 2.0, &k1));
    let k3 = f(&y.add_scaled(h / 2.0, &k2));
    let k4 = f(&y.add_scaled(h, &k3));
    y.add_scaled(h / 6.0, &k1)
        .add_scaled(h / 3.0, &k2)
        .add_scaled(h / 3.0, &k3)
        .add_scaled(h / 6.0, &k4)
}

/// Output times `t0, t0 + dt, …` up to `t_end`, plus `t_end` itself when it is
/// not on the grid.
pub fn output_times(t0: f64, t_end: f64, dt_out: f64) -> Result<Vec<f64>> {
    if !(dt_out > 0.0) || !dt_out.is_finite() {
        return Err(Error::InvalidTimeGrid(format!("dt_out = {dt_out} must be positive")));
    }
    if !(t_end > t0) || !t_end.is_finite() {
        return Err(Error::InvalidTimeGrid(format!("t_end = {t_end} must exceed t0 = {t0}")));
    }
    let span = t_end - t0;
    let ratio = span / dt_out;
    let n = (ratio + 1e-9).floor() as usize;
    let mut times: Vec<f64> = (0..=n).map(|k| t0 + k as f64 * dt_out).collect();
    if ratio - n as f64 > 1e-9 {
        times.push(t_end);
    } else {
        *times.last_mut().unwrap() = t0 + n as f64 * dt_out;
    }
    Ok(times)
}

/// Number of equal substeps covering `interval` with steps no longer than
/// `h_max`, and the resulting step.
pub fn substeps(interval: f64, h_max: f64) -> Result<(usize, f64)> {
    let n = (interval / h_max).ceil().max(1.0);
    let h = interval / n;
    if !(h > 1e-12 * interval.abs().max(1.0)) || !n.is_finite() || n > 1e9 {
        return Err(Error::StepSizeUnderflow { step: h });
    }
    Ok((n as usize, h))
}

/// Drives `f` across `times`, calling `sample` at each time (including the
/// first) with the state reached there.
pub fn integrate<S, F, G>(y0: S, times: &[f64], h_max: f64, f: F, mut sample: G) -> Result<()>
where
    S: OdeState,
    F: Fn(&S) -> S,
    G: FnMut(f64, &S) -> Result<()>,
{
    let mut y = y0;
    let Some((&first, rest)) = times.split_first() else {
        return Ok(());
    };
    sample(first, &y)?;
    let mut t = first;
    for &next in rest {
        let (n, h) = substeps(next - t, h_max)?;
        for _ in 0..n {
            y = step(&y, h, &f);
        }
        t = next;
        sample(t, &y)?;
    }
    Ok(())
}

impl OdeState for f64 {
    fn add_scaled(&self, s: f64, other: &Self) -> Self {
        self + s * other
    }
}
