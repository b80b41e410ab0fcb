//! Hermite and Smith normal forms over the integers.

use super::matrix::IMatrix;
use rug::Integer;

pub(crate) fn floor_div(a: &Integer, b: &Integer) -> Integer {
    <(Integer, Integer)>::from(a.div_rem_floor_ref(b)).0
}

fn row_sub_mul(m: &mut IMatrix, dst: usize, src: usize, q: &Integer) {
    if *q == 0 {
        return;
    }
    for j in 0..m.cols() {
        let t = Integer::from(q * &m[(src, j)]);
        m[(dst, j)] -= t;
    }
}

fn col_sub_mul(m: &mut IMatrix, dst: usize, src: usize, q: &Integer) {
    if *q == 0 {
        return;
    }
    for i in 0..m.rows() {
        let t = Integer::from(q * &m[(i, src)]);
        m[(i, dst)] -= t;
    }
}

fn negate_row(m: &mut IMatrix, r: usize) {
    for x in m.row_mut(r) {
        *x = Integer::from(-&*x);
    }
}

/// Row Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U·M = H`. Pivots are positive, entries above a pivot lie in
/// `[0, pivot)`, zero rows come last.
pub fn hnf(m: &IMatrix) -> (IMatrix, IMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IMatrix::identity(rows);
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| h[(i, c)] != 0)
                .min_by(|&a, &b| h[(a, c)].cmp_abs(&h[(b, c)]));
            let Some(p) = piv else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)] == 0 {
                    continue;
                }
                let q = floor_div(&h[(i, c)], &h[(r, c)]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
                if h[(i, c)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)] == 0 {
            continue;
        }
        if h[(r, c)] < 0 {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = floor_div(&h[(i, c)], &h[(r, c)]);
            row_sub_mul(&mut h, i, r, &q);
            row_sub_mul(&mut u, i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(D, U, V)` with `U·M·V = D` diagonal,
/// nonnegative, and each diagonal entry dividing the next.
pub fn snf(m: &IMatrix) -> (IMatrix, IMatrix, IMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IMatrix::identity(rows);
    let mut v = IMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)] != 0 && best.map_or(true, |(a, b)| d[(i, j)].cmp_abs(&d[(a, b)]).is_lt()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_snf(d, u, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)] != 0 {
                    let q = floor_div(&d[(i, t)], &d[(t, t)]);
                    row_sub_mul(&mut d, i, t, &q);
                    row_sub_mul(&mut u, i, t, &q);
                    clean &= d[(i, t)] == 0;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)] != 0 {
                    let q = floor_div(&d[(t, j)], &d[(t, t)]);
                    col_sub_mul(&mut d, j, t, &q);
                    col_sub_mul(&mut v, j, t, &q);
                    clean &= d[(t, j)] == 0;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_divisible(&d[(t, t)])));
            match bad {
                Some(i) => {
                    let one = Integer::from(-1);
                    row_sub_mul(&mut d, t, i, &one);
                    row_sub_mul(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    finish_snf(d, u, v)
}

fn finish_snf(mut d: IMatrix, mut u: IMatrix, v: IMatrix) -> (IMatrix, IMatrix, IMatrix) {
    for t in 0..d.rows().min(d.cols()) {
        if d[(t, t)] < 0 {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    (d, u, v)
}

/// Basis (rows) of the integer left kernel `{v : v·M = 0}`, saturated.
pub fn left_kernel(m: &IMatrix) -> IMatrix {
    let (h, u) = hnf(m);
    let zero_rows: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().all(|x| *x == 0)).collect();
    let cols: Vec<usize> = (0..u.cols()).collect();
    u.submatrix(&zero_rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IMatrix {
        IMatrix::from_i64_rows(rows)
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hnf(&im(&[&[2, 0], &[0, 3]]));
        assert_eq!(h, im(&[&[2, 0], &[0, 3]]));
        assert_eq!(u, IMatrix::identity(2));

        let (h, _) = hnf(&im(&[&[0, 1], &[1, 0]]));
        assert_eq!(h, IMatrix::identity(2));

        let m = im(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, im(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn hnf_rank_deficient_puts_zero_rows_last() {
        let m = im(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let (h, u) = hnf(&m);
        assert_eq!(u.mul(&m), h);
        assert!(h.row(2).iter().all(|x| *x == 0));
        let k = left_kernel(&m);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&m).is_zero());
    }

    #[test]
    fn snf_examples() {
        let (d, _, _) = snf(&IMatrix::identity(3));
        assert_eq!(d, IMatrix::identity(3));

        let m = im(&[&[2, 4], &[6, 8]]);
        let (d, u, v) = snf(&m);
        assert_eq!(d, im(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m).mul(&v), d);

        let z = IMatrix::zero(2, 3);
        let (d, u, v) = snf(&z);
        assert!(d.is_zero());
        assert_eq!(u, IMatrix::identity(2));
        assert_eq!(v, IMatrix::identity(3));
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let m = im(&[&[2, 0], &[0, 3]]);
        let (d, u, v) = snf(&m);
        assert_eq!(d, im(&[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&m).mul(&v), d);
    }
}
