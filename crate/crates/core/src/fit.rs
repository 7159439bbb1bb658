//! Least-squares fit of `A exp(-t / tau) + C`.

/// Fitted single-exponential decay.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpFit {
    pub a: f64,
    /// Decay time; `f64::INFINITY` when the data do not decay.
    pub tau: f64,
    pub c: f64,
    pub r2: f64,
}

impl ExpFit {
    pub fn eval(&self, t: f64) -> f64 {
        if self.tau.is_infinite() {
            self.a + self.c
        } else {
            self.a * (-t / self.tau).exp() + self.c
        }
    }
}

/// Linear least squares for `A` and `C` at fixed `tau`; returns `(A, C, sse)`.
fn linear_part(t: &[f64], y: &[f64], tau: f64) -> (f64, f64, f64) {
    let n = t.len() as f64;
    let (mut se, mut see, mut sy, mut sey) = (0.0, 0.0, 0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(y) {
        let e = (-ti / tau).exp();
        se += e;
        see += e * e;
        sy += yi;
        sey += e * yi;
    }
    let det = n * see - se * se;
    let (a, c) = if det.abs() < 1e-300 {
        (0.0, sy / n)
    } else {
        ((n * sey - se * sy) / det, (see * sy - se * sey) / det)
    };
    let sse = t.iter().zip(y).map(|(&ti, &yi)| (a * (-ti / tau).exp() + c - yi).powi(2)).sum();
    (a, c, sse)
}

/// Fits `y = A exp(-t / tau) + C` with `C` free.
///
/// `tau` is scanned on a logarithmic grid spanning the sampled times and then
/// refined by golden-section search. Data whose spread is below `1e-12`
/// of their magnitude are reported as non-decaying (`tau = inf`).
pub fn fit_exponential(t: &[f64], y: &[f64]) -> ExpFit {
    assert_eq!(t.len(), y.len(), "fit needs matching sample arrays");
    assert!(t.len() >= 3, "fit needs at least three samples");
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    if sst.sqrt() <= 1e-12 * scale * (y.len() as f64).sqrt() {
        return ExpFit { a: 0.0, tau: f64::INFINITY, c: mean, r2: 1.0 };
    }
    let positive: Vec<f64> = t.iter().copied().filter(|&x| x > 0.0).collect();
    let t_min = positive.iter().copied().fold(f64::INFINITY, f64::min).min(t[t.len() - 1] * 1e-3);
    let t_max = t.iter().copied().fold(0.0f64, f64::max);
    let (lo, hi) = ((t_min * 0.1).ln(), (t_max * 100.0).ln());
    let cost = |ln_tau: f64| linear_part(t, y, ln_tau.exp()).2;
    let n_scan = 400;
    let mut best = (lo, f64::INFINITY);
    for i in 0..=n_scan {
        let x = lo + (hi - lo) * i as f64 / n_scan as f64;
        let c = cost(x);
        if c < best.1 {
            best = (x, c);
        }
    }
    let step = (hi - lo) / n_scan as f64;
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    for _ in 0..100 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = cost(x2);
        }
    }
    let tau = (0.5 * (a + b)).exp();
    let (amp, c, sse) = linear_part(t, y, tau);
    ExpFit { a: amp, tau, c, r2: 1.0 - sse / sst }
}
