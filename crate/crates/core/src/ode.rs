//! Classical fixed-step fourth-order Runge-Kutta on flat state vectors.

/// Scratch buffers for [`rk4_step`], reused across steps to avoid allocation.
#[derive(Debug, Clone, Default)]
pub struct Rk4Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Workspace {
    pub fn new(n: usize) -> Self {
        Rk4Workspace {
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
        }
    }

    fn resize(&mut self, n: usize) {
        for v in [
            &mut self.k1,
            &mut self.k2,
            &mut self.k3,
            &mut self.k4,
            &mut self.tmp,
        ] {
            v.resize(n, 0.0);
        }
    }
}

/// Advance `y` by `h` for the autonomous system `dy = f(y)`.
///
/// Forcing that must stay constant over the step (fluid temperature, source
/// current) is captured by the closure.
#[allow(clippy::needless_range_loop)]
pub fn rk4_step<F>(y: &mut [f64], h: f64, ws: &mut Rk4Workspace, mut f: F)
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = y.len();
    ws.resize(n);

    f(y, &mut ws.k1);
    for i in 0..n {
        ws.tmp[i] = y[i] + 0.5 * h * ws.k1[i];
    }
    f(&ws.tmp, &mut ws.k2);
    for i in 0..n {
        ws.tmp[i] = y[i] + 0.5 * h * ws.k2[i];
    }
    f(&ws.tmp, &mut ws.k3);
    for i in 0..n {
        ws.tmp[i] = y[i] + h * ws.k3[i];
    }
    f(&ws.tmp, &mut ws.k4);
    for i in 0..n {
        y[i] += h / 6.0 * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
    }
}
