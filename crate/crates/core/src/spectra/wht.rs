use std::ops::{Add, Sub};

/// Unnormalized in-place Walsh-Hadamard transform,
/// `out[s] = sum_y data[y] (-1)^{popcount(s & y)}`.
///
/// Applying it twice multiplies every entry by `data.len()`; callers carry
/// their own scaling.
pub fn wht_in_place<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(len.is_power_of_two(), "WHT length {len} is not a power of two");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half <<= 1;
    }
}
