// Dense solves for the tiny systems of the hull and ball kernels (n <= 4).

pub(crate) const MAX_N: usize = 4;

/// Solves `a · x = b` by Gaussian elimination with partial pivoting. Returns
/// `None` when a pivot falls below `tiny`.
pub(crate) fn solve(
    a: &mut [[f64; MAX_N]; MAX_N],
    b: &mut [f64; MAX_N],
    n: usize,
    tiny: f64,
) -> Option<[f64; MAX_N]> {
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() <= tiny {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let pivot = a[col];
                for (v, p) in a[row][col..n].iter_mut().zip(&pivot[col..n]) {
                    *v -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; MAX_N];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let mut a = [[0.0; MAX_N]; MAX_N];
        a[0][0] = 2.0;
        a[0][1] = 1.0;
        a[1][0] = 1.0;
        a[1][1] = 3.0;
        let mut b = [3.0, 5.0, 0.0, 0.0];
        let x = solve(&mut a, &mut b, 2, 1e-14).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15);
        assert!((x[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn singular_is_none() {
        let mut a = [
            [1.0, 2.0, 0.0, 0.0],
            [2.0, 4.0, 0.0, 0.0],
            [0.0; 4],
            [0.0; 4],
        ];
        let mut b = [1.0, 2.0, 0.0, 0.0];
        assert!(solve(&mut a, &mut b, 2, 1e-12).is_none());
    }
}
