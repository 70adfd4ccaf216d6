//! Exact integer and rational matrix routines.
//!
//! Matrices are plain row-major `Vec<Vec<_>>`. Everything here is exact; there
//! is no floating point anywhere in this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn transpose<T: Clone>(a: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += x * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn to_rational(a: &[Vec<BigInt>]) -> RatMatrix {
    a.iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// gcd of the entries, always non-negative; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Scale a rational vector by the lcm of its denominators, keeping direction.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}

/// Divide an integer vector by its content. The zero vector is returned as is.
pub fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

fn row_sub_mul(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (src, dst) = if target < source {
        let (lo, hi) = rows.split_at_mut(source);
        (&hi[0], &mut lo[target])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&lo[source], &mut hi[0])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -&*x;
    }
}

/// Row Hermite normal form.
///
/// Returns `(h, t)` where `h` holds the nonzero rows of the HNF (positive
/// pivots, entries above each pivot reduced into `[0, pivot)`) and `t` is a
/// unimodular `m × m` matrix with `t · a = [h; 0]`. The transform is only
/// accumulated when `track` is set; otherwise an empty matrix is returned.
pub fn hnf_with_transform(a: &[Vec<BigInt>], cols: usize, track: bool) -> (IntMatrix, IntMatrix) {
    let m = a.len();
    let mut h: IntMatrix = a.to_vec();
    let mut t = if track { identity(m) } else { Vec::new() };
    let mut pivot_row = 0;
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    for col in 0..cols {
        if pivot_row == m {
            break;
        }
        loop {
            // smallest nonzero |entry| at or below pivot_row
            let best = (pivot_row..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(best) = best else { break };
            h.swap(pivot_row, best);
            if track {
                t.swap(pivot_row, best);
            }
            let mut done = true;
            for i in pivot_row + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[pivot_row][col]);
                row_sub_mul(&mut h, i, pivot_row, &q);
                if track {
                    row_sub_mul(&mut t, i, pivot_row, &q);
                }
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m && !h[pivot_row][col].is_zero() {
            if h[pivot_row][col].is_negative() {
                negate_row(&mut h[pivot_row]);
                if track {
                    negate_row(&mut t[pivot_row]);
                }
            }
            for i in 0..pivot_row {
                let q = h[i][col].div_floor(&h[pivot_row][col]);
                row_sub_mul(&mut h, i, pivot_row, &q);
                if track {
                    row_sub_mul(&mut t, i, pivot_row, &q);
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    h.truncate(pivot_row);
    (h, t)
}

pub fn hnf(a: &[Vec<BigInt>], cols: usize) -> IntMatrix {
    hnf_with_transform(a, cols, false).0
}

/// Column index of the first nonzero entry of each HNF row.
pub fn pivot_columns(h: &[Vec<BigInt>]) -> Vec<usize> {
    h.iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero"))
        .collect()
}

/// Z-basis (in HNF) of `{x ∈ Z^cols : a · x = 0}`.
pub fn int_kernel(a: &[Vec<BigInt>], cols: usize) -> IntMatrix {
    if a.is_empty() || a.iter().all(|r| r.iter().all(Zero::is_zero)) {
        return identity(cols);
    }
    let at = transpose(a, cols);
    let (h, t) = hnf_with_transform(&at, a.len(), true);
    let kernel: IntMatrix = t[h.len()..].to_vec();
    hnf(&kernel, cols)
}

/// Coefficients `c` with `c · basis = target`, assuming `basis` is in row HNF.
/// `None` if `target` is not an integer combination of the rows.
pub fn hnf_coordinates(basis: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut residual = target.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in basis {
        let p = row.iter().position(|x| !x.is_zero())?;
        if residual[..p].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = residual[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, b) in residual.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        coeffs.push(q);
    }
    if residual.iter().all(Zero::is_zero) {
        Some(coeffs)
    } else {
        None
    }
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
pub fn smith_invariants(a: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut m: IntMatrix = a.to_vec();
    let rows = m.len();
    let mut out = Vec::new();
    let mut k = 0;
    while k < rows && k < cols {
        // locate smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(k, bi);
        for row in m.iter_mut() {
            row.swap(k, bj);
        }
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if !m[i][k].is_zero() {
                    let q = m[i][k].div_floor(&m[k][k]);
                    row_sub_mul(&mut m, i, k, &q);
                    if !m[i][k].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !m[k][j].is_zero() {
                    let q = m[k][j].div_floor(&m[k][k]);
                    for row in m.iter_mut() {
                        let s = row[k].clone();
                        row[j] -= &q * s;
                    }
                    if !m[k][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the trailing block by the pivot
                let offender = (k + 1..rows)
                    .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&m[i][j] % &m[k][k]).is_zero());
                match offender {
                    Some((i, _)) => {
                        let src = m[i].clone();
                        for (d, s) in m[k].iter_mut().zip(src) {
                            *d += s;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/col k into the pivot
            let mut best = (k, k);
            for i in k..rows {
                if !m[i][k].is_zero() && m[i][k].abs() < m[best.0][best.1].abs() {
                    best = (i, k);
                }
            }
            for j in k..cols {
                if !m[k][j].is_zero() && m[k][j].abs() < m[best.0][best.1].abs() {
                    best = (k, j);
                }
            }
            m.swap(k, best.0);
            for row in m.iter_mut() {
                row.swap(k, best.1);
            }
        }
        out.push(m[k][k].abs());
        k += 1;
    }
    out
}

/// Determinant via fraction-free Bareiss elimination.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IntMatrix = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn rat_inverse(a: &[Vec<BigRational>]) -> Option<RatMatrix> {
    let n = a.len();
    let mut m: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, p);
        let inv = m[k][k].recip();
        for x in m[k].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                let src = m[k].clone();
                for (d, s) in m[i].iter_mut().zip(src) {
                    *d -= &f * s;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Rational coefficients `c` with `c · basis = target`, if any exist.
pub fn rat_solve_left(basis: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let r = basis.len();
    let n = target.len();
    // columns of the system are basis rows; rows are coordinates
    let mut sys: RatMatrix = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut pr = 0;
    for c in 0..r {
        let Some(p) = (pr..n).find(|&i| !sys[i][c].is_zero()) else { continue };
        sys.swap(pr, p);
        let inv = sys[pr][c].recip();
        for x in sys[pr].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != pr && !sys[i][c].is_zero() {
                let f = sys[i][c].clone();
                let src = sys[pr].clone();
                for (d, s) in sys[i].iter_mut().zip(src) {
                    *d -= &f * s;
                }
            }
        }
        pivot_cols.push(c);
        pr += 1;
    }
    if sys[pr..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); r];
    for (i, &c) in pivot_cols.iter().enumerate() {
        out[c] = sys[i][r].clone();
    }
    Some(out)
}

/// Rank of a rational matrix.
pub fn rat_rank(a: &[Vec<BigRational>], cols: usize) -> usize {
    let mut m: RatMatrix = a.to_vec();
    let rows = m.len();
    let mut pr = 0;
    for c in 0..cols {
        let Some(p) = (pr..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(pr, p);
        for i in pr + 1..rows {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[pr][c];
                let src = m[pr].clone();
                for (d, s) in m[i].iter_mut().zip(src) {
                    *d -= &f * s;
                }
            }
        }
        pr += 1;
    }
    pr
}

/// Extended gcd over a vector: returns `(g, c)` with `Σ c_i v_i = g = gcd(v)`.
pub fn bezout(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let e = g.extended_gcd(x);
        // e.gcd = e.x * g + e.y * x
        for c in coeffs[..i].iter_mut() {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -&*c;
        }
    }
    (g, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let h = hnf(&a, 3);
        assert_eq!(h, m(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
        let (h2, t) = hnf_with_transform(&a, 3, true);
        assert_eq!(h, h2);
        assert_eq!(mat_mul(&t, &a)[..3], h[..]);
        assert_eq!(determinant(&t).abs(), BigInt::one());
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = int_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for row in &k {
            assert!(mat_vec(&a, row).iter().all(Zero::is_zero));
        }
        assert_eq!(smith_invariants(&k, 3), vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn smith_of_index_two_span() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(smith_invariants(&a, 2), vec![BigInt::from(1), BigInt::from(2)]);
        let b = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let inv = smith_invariants(&b, 3);
        assert_eq!(inv.iter().product::<BigInt>(), determinant(&b).abs());
        for w in inv.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn coordinates_in_hnf_basis() {
        let b = m(&[&[1, 0, 1], &[0, 2, 0]]);
        assert_eq!(
            hnf_coordinates(&b, &[BigInt::from(3), BigInt::from(4), BigInt::from(3)]),
            Some(vec![BigInt::from(3), BigInt::from(2)])
        );
        assert_eq!(hnf_coordinates(&b, &[BigInt::from(0), BigInt::from(1), BigInt::from(0)]), None);
    }

    #[test]
    fn bezout_combination() {
        let v: Vec<BigInt> = [6, 10, 15].iter().map(|&x| BigInt::from(x)).collect();
        let (g, c) = bezout(&v);
        assert_eq!(g, BigInt::one());
        assert_eq!(dot(&v, &c), BigInt::one());
    }

    #[test]
    fn determinant_and_inverse_agree() {
        let a = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
        assert_eq!(determinant(&a), BigInt::from(2));
        let inv = rat_inverse(&to_rational(&a)).unwrap();
        assert_eq!(inv[2][2], BigRational::new(BigInt::from(-1), BigInt::from(2)));
    }
}
