use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanKey = (usize, bool);

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry((len, inverse))
        .or_insert_with(|| {
            let dir = if inverse {
                FftDirection::Inverse
            } else {
                FftDirection::Forward
            };
            FftPlanner::new().plan_fft(len, dir)
        })
        .clone()
}

/// Unnormalized in-place 2D transform of an `m × m` array (axis 1 fastest).
pub(crate) fn fft2_in_place(data: &mut [Complex64], m: usize, inverse: bool) {
    debug_assert_eq!(data.len(), m * m);
    let fft = plan(m, inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    // rows (contiguous)
    fft.process_with_scratch(data, &mut scratch);
    // columns via a transposed copy
    let mut col = vec![Complex64::default(); m * m];
    for i2 in 0..m {
        for i1 in 0..m {
            col[i1 * m + i2] = data[i2 * m + i1];
        }
    }
    fft.process_with_scratch(&mut col, &mut scratch);
    for i1 in 0..m {
        for i2 in 0..m {
            data[i2 * m + i1] = col[i1 * m + i2];
        }
    }
}

/// Forward transform of real samples, normalized so that `A e^{ik·x}`
/// yields coefficient `A` at `k`.
pub(crate) fn forward_real(values: &[f64], m: usize) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2_in_place(&mut data, m, false);
    let scale = 1.0 / (m * m) as f64;
    for c in &mut data {
        *c *= scale;
    }
    data
}

/// Inverse of [`forward_real`] without discarding the imaginary part.
pub(crate) fn inverse_complex(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut data = coeffs.to_vec();
    fft2_in_place(&mut data, m, true);
    data
}
