//! Composite Gauss-Legendre quadrature.
//!
//! Nodes and weights are computed at runtime by Newton iteration on the
//! Legendre polynomials, so accuracy is limited only by f64 arithmetic.

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A reusable quadrature rule: `panels` equal sub-intervals, `order`-point
/// Gauss-Legendre on each.
pub struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Grid { nodes, weights }
    }

    /// Integrate `f` over [a, b] with a single panel.
    pub fn panel<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, f: &mut F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Composite integration over [a, b] split into `panels` pieces.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, f: &mut F) -> f64 {
        let step = (b - a) / panels as f64;
        let mut acc = 0.0;
        for k in 0..panels {
            let lo = a + step * k as f64;
            acc += self.panel(lo, lo + step, f);
        }
        acc
    }
}

/// Integrate `f` over [a, b] with a default rule good to ~1e-12 for smooth
/// integrands.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    Grid::new(32).composite(a, b, panels, &mut f)
}

/// Normalized CDF of `exp(log_pdf)` on (lo, hi), evaluated at each of the
/// (ascending) `points`.
///
/// The density is integrated cumulatively from `lo` through every point, so
/// accuracy does not depend on any global grid resolution. Points outside
/// (lo, hi) are clamped to 0/1.
pub fn normalized_cdf_at<F: FnMut(f64) -> f64>(
    points: &[f64],
    mut log_pdf: F,
    lo: f64,
    hi: f64,
) -> Vec<f64> {
    assert!(points.windows(2).all(|w| w[0] <= w[1]), "points must be sorted");
    // Work with a shifted density to avoid overflow: pick the max log-pdf over
    // a scan grid as the shift.
    let mut shift = f64::NEG_INFINITY;
    let scan = 512;
    for i in 0..=scan {
        let x = lo + (hi - lo) * i as f64 / scan as f64;
        let v = log_pdf(x);
        if v.is_finite() && v > shift {
            shift = v;
        }
    }
    assert!(shift.is_finite(), "log-density not finite anywhere on ({lo}, {hi})");
    let grid = Grid::new(16);
    let mut pdf = |x: f64| {
        let v = log_pdf(x);
        if v.is_finite() {
            (v - shift).exp()
        } else {
            0.0
        }
    };

    let mut cum = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    let mut prev = lo;
    for &x in points {
        let x = x.clamp(lo, hi);
        if x > prev {
            // Split long gaps so single panels stay accurate.
            let gap = x - prev;
            let pieces = (gap / ((hi - lo) / 256.0)).ceil().max(1.0) as usize;
            acc += grid.composite(prev, x, pieces.min(64), &mut pdf);
            prev = x;
        }
        cum.push(acc);
    }
    let total = acc + grid.composite(prev, hi, 64, &mut pdf);
    assert!(total > 0.0, "density integrates to zero");
    cum.iter().map(|c| (c / total).clamp(0.0, 1.0)).collect()
}
