use faer::Mat;

/// A local maximum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Vertex of the parabola through the maximum and its neighbours.
    pub location: f64,
    pub height: f64,
    /// Half width at half maximum, from linear interpolation.
    pub half_width: f64,
}

/// A local maximum of a sampled surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak2 {
    pub location: [f64; 2],
    pub height: f64,
    pub half_width: [f64; 2],
}

/// Offset (in samples) and height of the parabola through three values.
fn parabolic(left: f64, mid: f64, right: f64) -> (f64, f64) {
    let curvature = left - 2.0 * mid + right;
    if curvature >= 0.0 {
        return (0.0, mid);
    }
    let offset = 0.5 * (left - right) / curvature;
    (offset, mid - 0.25 * (left - right) * offset)
}

fn interpolate(coords: &[f64], i: usize, offset: f64) -> f64 {
    if offset >= 0.0 {
        coords[i] + offset * (coords[i + 1] - coords[i])
    } else {
        coords[i] + offset * (coords[i] - coords[i - 1])
    }
}

/// Distance from the maximum at `i` to where `values` first falls to half
/// of its height, averaged over both sides that reach it.
fn half_width(values: impl Fn(usize) -> f64, coords: &[f64], i: usize) -> f64 {
    let half = 0.5 * values(i);
    let len = coords.len();
    let mut sides = Vec::new();
    let mut j = i;
    while j > 0 && values(j - 1) > half {
        j -= 1;
    }
    if j > 0 {
        let (a, b) = (values(j - 1), values(j));
        sides.push(coords[i] - (coords[j - 1] + (half - a) / (b - a) * (coords[j] - coords[j - 1])));
    }
    let mut j = i;
    while j + 1 < len && values(j + 1) > half {
        j += 1;
    }
    if j + 1 < len {
        let (a, b) = (values(j), values(j + 1));
        sides.push(coords[j] + (a - half) / (a - b) * (coords[j + 1] - coords[j]) - coords[i]);
    }
    if sides.is_empty() {
        f64::INFINITY
    } else {
        sides.iter().sum::<f64>() / sides.len() as f64
    }
}

/// Interior local maxima above `min_height` times the global maximum,
/// ordered by coordinate. A flat top is reported once.
pub fn find_peaks(coords: &[f64], values: &[f64], min_height: f64) -> Vec<Peak> {
    assert_eq!(coords.len(), values.len(), "coordinates and values differ in length");
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.len() < 3 || !(top > 0.0) {
        return Vec::new();
    }
    let threshold = min_height * top;
    (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] >= threshold && values[i] > 0.0)
        .map(|i| {
            let (offset, height) = parabolic(values[i - 1], values[i], values[i + 1]);
            Peak {
                location: interpolate(coords, i, offset),
                height,
                half_width: half_width(|k| values[k], coords, i),
            }
        })
        .collect()
}

/// Interior local maxima of `table[(i, j)]` over its eight neighbours, above
/// `min_height` times the global maximum, ordered by height (descending).
/// Rows follow `xs`, columns `ys`.
pub fn find_peaks_2d(xs: &[f64], ys: &[f64], table: &Mat<f64>, min_height: f64) -> Vec<Peak2> {
    let (rows, cols) = (table.nrows(), table.ncols());
    assert_eq!((rows, cols), (xs.len(), ys.len()), "axes do not match the table");
    let mut top = f64::NEG_INFINITY;
    for j in 0..cols {
        for i in 0..rows {
            top = top.max(table[(i, j)]);
        }
    }
    if rows < 3 || cols < 3 || !(top > 0.0) {
        return Vec::new();
    }
    let threshold = min_height * top;
    let mut peaks = Vec::new();
    for i in 1..rows - 1 {
        for j in 1..cols - 1 {
            let v = table[(i, j)];
            if v < threshold || v <= 0.0 {
                continue;
            }
            // Neighbours earlier in raster order must be strictly lower so
            // that a flat top yields a single peak.
            let is_max = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| {
                    if di == 0 && dj == 0 {
                        return true;
                    }
                    let w = table[((i as i64 + di) as usize, (j as i64 + dj) as usize)];
                    if (di, dj) < (0, 0) {
                        v > w
                    } else {
                        v >= w
                    }
                })
            });
            if !is_max {
                continue;
            }
            let (ox, hx) = parabolic(table[(i - 1, j)], v, table[(i + 1, j)]);
            let (oy, hy) = parabolic(table[(i, j - 1)], v, table[(i, j + 1)]);
            peaks.push(Peak2 {
                location: [interpolate(xs, i, ox), interpolate(ys, j, oy)],
                height: hx.max(hy),
                half_width: [
                    half_width(|k| table[(k, j)], xs, i),
                    half_width(|k| table[(i, k)], ys, j),
                ],
            });
        }
    }
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height));
    peaks
}
