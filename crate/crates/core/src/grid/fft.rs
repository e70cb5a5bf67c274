use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Plans = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, Plans)> = RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry((len, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

/// Unnormalized n-dimensional DFT over a row-major buffer of `shape`.
/// Axes of length one are skipped.
pub(crate) fn fft_nd(buf: &mut [Complex64], shape: [usize; 3], inverse: bool) {
    debug_assert_eq!(buf.len(), shape.iter().product::<usize>());
    let mut scratch = Vec::new();
    let mut tmp = Vec::new();
    for axis in 0..3 {
        let len = shape[axis];
        if len == 1 {
            continue;
        }
        let fft = plan(len, inverse);
        scratch.resize(fft.get_inplace_scratch_len(), Complex64::new(0.0, 0.0));
        let inner: usize = shape[axis + 1..].iter().product();
        if inner == 1 {
            fft.process_with_scratch(buf, &mut scratch);
            continue;
        }
        // [outer, len, inner] -> [outer, inner, len], transform rows, and back
        let outer: usize = shape[..axis].iter().product();
        tmp.resize(buf.len(), Complex64::new(0.0, 0.0));
        let block = len * inner;
        for o in 0..outer {
            let src = &buf[o * block..(o + 1) * block];
            let dst = &mut tmp[o * block..(o + 1) * block];
            for l in 0..len {
                for i in 0..inner {
                    dst[i * len + l] = src[l * inner + i];
                }
            }
        }
        fft.process_with_scratch(&mut tmp, &mut scratch);
        for o in 0..outer {
            let src = &tmp[o * block..(o + 1) * block];
            let dst = &mut buf[o * block..(o + 1) * block];
            for l in 0..len {
                for i in 0..inner {
                    dst[l * inner + i] = src[i * len + l];
                }
            }
        }
    }
}
