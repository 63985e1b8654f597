//! Small numerical kernels shared by the spectra, criteria and oracle code:
//! occupation functions, graded Gauss-Legendre quadrature, a bracketing root
//! finder, least-squares lines and a log-space complementary error function.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

/// Bose occupation `1 / (exp(x) - 1)` for `x = beta * energy > 0`.
pub fn bose(x: f64) -> f64 {
    if x == f64::INFINITY {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// `energy * bose(beta * energy)`, finite as `energy -> 0`.
pub fn bose_energy(beta: f64, energy: f64) -> f64 {
    let x = beta * energy;
    if x == f64::INFINITY {
        0.0
    } else if x < 1e-300 {
        1.0 / beta
    } else {
        energy / x.exp_m1()
    }
}

/// Fermi occupation `1 / (exp(x) + 1)`, stable for either sign of `x`.
pub fn fermi(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let n = order as f64;
    for i in 0..order {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre rule whose panels are graded geometrically away
/// from the lower limit.
///
/// Integrands here vary on a scale (a thermal energy) that may be many
/// orders of magnitude below the interval length; panels of width
/// `scale / 64, scale / 32, ...` resolve that region before the rule switches
/// to uniform panels.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    uniform_panels: usize,
}

impl Default for GradedQuadrature {
    fn default() -> Self {
        Self::new(20, 32)
    }
}

impl GradedQuadrature {
    pub fn new(order: usize, uniform_panels: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self {
            nodes,
            weights,
            uniform_panels: uniform_panels.max(1),
        }
    }

    fn panel(&self, f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Integrates `f` over `[a, b]`; `scale` is the width of the region near
    /// `a` where `f` changes fastest.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64, a: f64, b: f64, scale: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let len = b - a;
        let mut total = 0.0;
        let mut lo = a;
        let uniform_width = len / self.uniform_panels as f64;
        if scale > 0.0 && scale < uniform_width {
            let mut width = scale / 64.0;
            while lo + width < a + uniform_width {
                total += self.panel(&mut f, lo, lo + width);
                lo += width;
                width *= 2.0;
            }
        }
        let remaining = b - lo;
        let panels = ((remaining / uniform_width).ceil() as usize).max(1);
        let width = remaining / panels as f64;
        for p in 0..panels {
            let x0 = lo + p as f64 * width;
            total += self.panel(&mut f, x0, x0 + width);
        }
        total
    }

    /// Number of function evaluations `integrate` would spend.
    pub fn evaluations(&self, a: f64, b: f64, scale: f64) -> usize {
        let mut count = 0;
        self.integrate(
            |_| {
                count += 1;
                0.0
            },
            a,
            b,
            scale,
        );
        count
    }
}

/// Root of a decreasing function on a bracket `lo < hi` with
/// `f(lo) >= 0 >= f(hi)`, by the Illinois variant of regula falsi guarded
/// with bisection.
pub fn decreasing_root(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo <= 0.0 {
        return lo;
    }
    if f_hi >= 0.0 {
        return hi;
    }
    let mut side = 0i8;
    for _ in 0..300 {
        if (hi - lo).abs() <= xtol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo && x < hi) || !x.is_finite() {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            lo = x;
            f_lo = fx;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            f_hi = fx;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares straight line through `(x, y)` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of a sample from the line.
    pub max_residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Some(LineFit {
        slope,
        intercept,
        max_residual,
    })
}

/// `ln(erfc(x))` without underflow for large positive `x`.
pub fn ln_erfc(x: f64) -> f64 {
    if x < 25.0 {
        libm::erfc(x).ln()
    } else {
        // erfc(x) = exp(-x^2) / (x sqrt(pi)) * (1 - 1/(2x^2) + 3/(2x^2)^2 - ...)
        let t = 1.0 / (2.0 * x * x);
        let series = 1.0 - t + 3.0 * t * t - 15.0 * t * t * t + 105.0 * t * t * t * t;
        -x * x - (x * PI.sqrt()).ln() + series.ln()
    }
}

/// `ln(sum(exp(v)))` over a slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Median of a slice (copied and sorted).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        let sum_w: f64 = w.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
        // x^18 is within the exactness degree 2n - 1 = 19.
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((i - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn graded_quadrature_resolves_narrow_features() {
        let q = GradedQuadrature::default();
        // int_0^1 x / (exp(x/t) - 1) dx -> t^2 pi^2 / 6 for t << 1
        let t = 1e-4;
        let v = q.integrate(|x| bose_energy(1.0 / t, x), 0.0, 1.0, t);
        let exact = t * t * PI * PI / 6.0;
        assert!((v / exact - 1.0).abs() < 1e-10, "{v} vs {exact}");
        let smooth = q.integrate(|x| x.sin(), 0.0, PI, 0.0);
        assert!((smooth - 2.0).abs() < 1e-13);
    }

    #[test]
    fn root_finder_converges_on_steep_function() {
        let r = decreasing_root(|x| 1e6 * (-x).exp() - 3.0, -10.0, 50.0, 1e-15);
        assert!((r - (1e6f64 / 3.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn ln_erfc_is_continuous_across_the_switch() {
        let below = ln_erfc(25.0 - 1e-9);
        let above = ln_erfc(25.0);
        assert!((below - above).abs() < 1e-6);
        assert!((ln_erfc(0.0) - 0.0).abs() < 1e-15);
        assert!((ln_erfc(-30.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope - 2.5).abs() < 1e-14);
        assert!((fit.intercept + 1.0).abs() < 1e-14);
        assert!(fit.max_residual < 1e-14);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn occupations_are_stable_at_extremes() {
        assert_eq!(bose(f64::INFINITY), 0.0);
        assert!((fermi(0.0) - 0.5).abs() < 1e-15);
        assert!(fermi(800.0) >= 0.0 && fermi(800.0) < 1e-300);
        assert!((fermi(-800.0) - 1.0).abs() < 1e-15);
        assert!((bose_energy(2.0, 0.0) - 0.5).abs() < 1e-15);
    }
}
