//! Peak finding and line-width helpers for sampled spectra.

/// Indices of interior local maxima. A plateau counts once, at its first
/// sample.
pub fn local_maxima(y: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = y.len();
    let mut i = 1;
    while i + 1 < n {
        if y[i] > y[i - 1] {
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Local maxima whose abscissa lies in `[lo, hi]`.
pub fn local_maxima_in(x: &[f64], y: &[f64], lo: f64, hi: f64) -> Vec<usize> {
    local_maxima(y)
        .into_iter()
        .filter(|&i| x[i] >= lo && x[i] <= hi)
        .collect()
}

/// Peak position and height from a parabola through the three samples around
/// interior index `i`.
pub fn refine_peak(x: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= y.len() {
        return (x[i], y[i]);
    }
    let (x0, x1, x2) = (x[i - 1], x[i], x[i + 1]);
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if a >= 0.0 {
        return (x1, y1);
    }
    let b = d01 - a * (x0 + x1);
    let xp = -b / (2.0 * a);
    let c = y1 - a * x1 * x1 - b * x1;
    (xp, a * xp * xp + b * xp + c)
}

/// Full width at half maximum of the peak at index `i`, measured above zero
/// and linearly interpolated. `None` if the curve does not fall to half height
/// on both sides before rising again.
pub fn fwhm(x: &[f64], y: &[f64], i: usize) -> Option<f64> {
    let half = 0.5 * y[i];
    let crossing = |j: usize, k: usize| {
        let t = (half - y[j]) / (y[k] - y[j]);
        x[j] + t * (x[k] - x[j])
    };
    let mut left = None;
    let mut j = i;
    while j > 0 {
        if y[j - 1] > y[j] {
            return None;
        }
        if y[j - 1] <= half {
            left = Some(crossing(j - 1, j));
            break;
        }
        j -= 1;
    }
    let mut right = None;
    let mut j = i;
    while j + 1 < y.len() {
        if y[j + 1] > y[j] {
            return None;
        }
        if y[j + 1] <= half {
            right = Some(crossing(j, j + 1));
            break;
        }
        j += 1;
    }
    Some(right? - left?)
}
