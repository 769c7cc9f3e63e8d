//! Three-dimensional complex FFT over an `n × n × n` lattice stored x-fastest.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    /// Unnormalized inverse transform.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
    }

    fn run(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let slab = n * n;
        debug_assert_eq!(data.len(), slab * n);
        let scratch_len = fft.get_inplace_scratch_len();
        let zero = Complex64::new(0.0, 0.0);

        // x: contiguous rows
        data.par_chunks_mut(slab).for_each_init(
            || vec![zero; scratch_len],
            |scratch, s| fft.process_with_scratch(s, scratch),
        );

        // y: transpose each xy-slab so y is contiguous
        data.par_chunks_mut(slab).for_each_init(
            || (vec![zero; scratch_len], vec![zero; slab]),
            |(scratch, tmp), s| {
                transpose_square(s, tmp, n);
                fft.process_with_scratch(tmp, scratch);
                transpose_square(tmp, s, n);
            },
        );

        // z: gather columns into a z-contiguous buffer
        let mut columns = vec![zero; data.len()];
        {
            let src: &[Complex64] = data;
            columns.par_chunks_mut(n).enumerate().for_each(|(c, col)| {
                for (z, v) in col.iter_mut().enumerate() {
                    *v = src[c + slab * z];
                }
            });
        }
        columns.par_chunks_mut(slab).for_each_init(
            || vec![zero; scratch_len],
            |scratch, s| fft.process_with_scratch(s, scratch),
        );
        data.par_chunks_mut(slab).enumerate().for_each(|(z, s)| {
            for (c, v) in s.iter_mut().enumerate() {
                *v = columns[c * n + z];
            }
        });
    }
}

fn transpose_square(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for y in 0..n {
        for x in 0..n {
            dst[x * n + y] = src[y * n + x];
        }
    }
}
