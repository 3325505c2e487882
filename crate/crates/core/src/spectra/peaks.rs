use super::Spectrum2D;

/// A local extremum of a 2D spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub omega1: f64,
    pub omega3: f64,
    /// Signed value at the refined position.
    pub height: f64,
}

/// Vertex of the parabola through `(-1, l), (0, c), (1, r)`, as
/// `(offset, value)`; `None` when the points are not concave.
fn parabola_vertex(l: f64, c: f64, r: f64) -> Option<(f64, f64)> {
    let curvature = l - 2.0 * c + r;
    if curvature >= 0.0 {
        return None;
    }
    let offset = (0.5 * (l - r) / curvature).clamp(-0.5, 0.5);
    Some((offset, c - 0.25 * (l - r) * offset))
}

/// Local maxima of `|value|` above `threshold_fraction` times the global
/// maximum, sorted by decreasing magnitude. Positions and heights are
/// refined with independent quadratic fits along each axis.
pub fn find_peaks(spectrum: &Spectrum2D, threshold_fraction: f64) -> Vec<Peak> {
    let v = &spectrum.values;
    let (n3, n1) = v.dim();
    let global = spectrum.max_abs();
    if n1 == 0 || n3 == 0 || global == 0.0 {
        return Vec::new();
    }
    let cut = threshold_fraction * global;
    let mag = |r: usize, c: usize| v[[r, c]].abs();

    let mut peaks = Vec::new();
    for r in 0..n3 {
        for c in 0..n1 {
            let m = mag(r, c);
            if m == 0.0 || m < cut {
                continue;
            }
            // Ties: strict against earlier neighbours in raster order so a
            // plateau yields a single peak.
            let mut is_max = true;
            'scan: for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (rr, cc) = (r as i64 + dr, c as i64 + dc);
                    if rr < 0 || cc < 0 || rr >= n3 as i64 || cc >= n1 as i64 {
                        continue;
                    }
                    let other = mag(rr as usize, cc as usize);
                    let earlier = dr < 0 || (dr == 0 && dc < 0);
                    if other > m || (earlier && other == m) {
                        is_max = false;
                        break 'scan;
                    }
                }
            }
            if !is_max {
                continue;
            }

            let mut omega1 = spectrum.grid1.value(c);
            let mut omega3 = spectrum.grid3.value(r);
            let mut height = m;
            if c > 0 && c + 1 < n1 {
                if let Some((d, h)) = parabola_vertex(mag(r, c - 1), m, mag(r, c + 1)) {
                    omega1 += d * spectrum.grid1.step;
                    height += h - m;
                }
            }
            if r > 0 && r + 1 < n3 {
                if let Some((d, h)) = parabola_vertex(mag(r - 1, c), m, mag(r + 1, c)) {
                    omega3 += d * spectrum.grid3.step;
                    height += h - m;
                }
            }
            peaks.push(Peak {
                omega1,
                omega3,
                height: height.copysign(v[[r, c]]),
            });
        }
    }
    peaks.sort_by(|a, b| b.height.abs().total_cmp(&a.height.abs()));
    peaks
}
