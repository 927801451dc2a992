//! Hadamard matrices from the Sylvester recursion and Kronecker products.
//!
//! Entries are stored as `i8` in row-major order; every check is exact.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest order any constructor will materialize (64 MiB of entries).
pub const MAX_ORDER: usize = 1 << 13;

/// An `n × n` matrix with entries `±1` and `HᵀH = nI`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    /// Validates `rows` and wraps them.
    pub fn from_rows<I: Copy + Into<i64>, R: AsRef<[I]>>(rows: &[R]) -> Result<Self> {
        if !verify_hadamard(rows) {
            return Err(Error::NotHadamard("entries must be ±1 with orthogonal columns".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&v| if v.into() > 0 { 1 } else { -1 }))
            .collect();
        Ok(Self { order: rows.len(), entries })
    }

    /// A Hadamard matrix of order `n` when one of the supported constructions
    /// provides it, i.e. `n` a power of two.
    pub fn of_order(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::UnavailableOrder(n));
        }
        sylvester(n.trailing_zeros())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.entries.chunks_exact(self.order.max(1))
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.rows().map(<[i8]>::to_vec).collect()
    }

    pub fn first_row_is_ones(&self) -> bool {
        self.row(0).iter().all(|&v| v == 1)
    }

    /// Multiplies column `col` by −1.
    pub fn negate_column(&mut self, col: usize) {
        let n = self.order;
        for r in 0..n {
            self.entries[r * n + col] = -self.entries[r * n + col];
        }
    }

    pub fn negate_row(&mut self, row: usize) {
        let n = self.order;
        self.entries[row * n..(row + 1) * n].iter_mut().for_each(|v| *v = -*v);
    }

    /// Applies `new[i][j] = old[row_perm[i]][col_perm[j]]`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let n = self.order;
        assert!(row_perm.len() == n && col_perm.len() == n, "permutation length");
        let mut entries = Vec::with_capacity(n * n);
        for &r in row_perm {
            entries.extend(col_perm.iter().map(|&c| self.get(r, c)));
        }
        Self { order: n, entries }
    }

    pub fn is_valid(&self) -> bool {
        columns_orthogonal(self.order, |r, c| self.get(r, c) < 0)
    }
}

impl Serialize for HadamardMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows())
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::OrderTooLarge { order, limit: MAX_ORDER })
    } else {
        Ok(())
    }
}

/// `H_1 = [1]`, `H_{2n} = [[H_n, H_n], [H_n, −H_n]]`, applied `k` times.
pub fn sylvester(k: u32) -> Result<HadamardMatrix> {
    if k >= usize::BITS {
        return Err(Error::OrderTooLarge { order: usize::MAX, limit: MAX_ORDER });
    }
    check_order(1usize << k)?;
    let mut h = HadamardMatrix { order: 1, entries: vec![1] };
    for _ in 0..k {
        let n = h.order;
        let mut next = Vec::with_capacity(4 * n * n);
        for sign in [1i8, -1] {
            for row in h.rows() {
                next.extend_from_slice(row);
                next.extend(row.iter().map(|&v| sign * v));
            }
        }
        h = HadamardMatrix { order: 2 * n, entries: next };
    }
    Ok(h)
}

/// Kronecker product `A ⊗ B`; the result is re-verified before returning.
pub fn kronecker(a: &HadamardMatrix, b: &HadamardMatrix) -> Result<HadamardMatrix> {
    let (m, n) = (a.order, b.order);
    let order = m.checked_mul(n).ok_or(Error::OrderTooLarge { order: usize::MAX, limit: MAX_ORDER })?;
    check_order(order)?;
    let mut entries = Vec::with_capacity(order * order);
    for i in 0..m {
        for k in 0..n {
            for j in 0..m {
                let aij = a.get(i, j);
                entries.extend(b.row(k).iter().map(|&v| aij * v));
            }
        }
    }
    let h = HadamardMatrix { order, entries };
    if !h.is_valid() {
        return Err(Error::NotHadamard("Kronecker product of invalid factors".into()));
    }
    Ok(h)
}

/// Negates every column whose first entry is −1; the first row becomes all ones.
pub fn normalize_first_row(h: &HadamardMatrix) -> HadamardMatrix {
    let mut out = h.clone();
    for col in 0..h.order {
        if h.get(0, col) < 0 {
            out.negate_column(col);
        }
    }
    out
}

/// `true` iff `rows` is square with entries in `{−1, +1}` and `MᵀM = nI`.
pub fn verify_hadamard<I: Copy + Into<i64>, R: AsRef<[I]>>(rows: &[R]) -> bool {
    let n = rows.len();
    if n == 0 {
        return false;
    }
    let square_pm1 = rows.iter().all(|r| {
        let r = r.as_ref();
        r.len() == n && r.iter().all(|&v| matches!(v.into(), 1 | -1))
    });
    square_pm1 && columns_orthogonal(n, |r, c| rows[r].as_ref()[c].into() < 0)
}

/// Exact column orthogonality for a ±1 matrix given by its sign pattern.
///
/// Columns are packed into bit sets (bit set where the entry is −1), so
/// `⟨h_i, h_j⟩ = n − 2·popcount(h_i ⊕ h_j)`; diagonal entries are `n`
/// automatically for ±1 entries.
fn columns_orthogonal(n: usize, negative: impl Fn(usize, usize) -> bool) -> bool {
    if n > 2 && n % 4 != 0 {
        return false;
    }
    let words = n.div_ceil(64);
    let mut cols = vec![0u64; n * words];
    for r in 0..n {
        for c in 0..n {
            if negative(r, c) {
                cols[c * words + r / 64] |= 1 << (r % 64);
            }
        }
    }
    let half = (n / 2) as u32;
    (0..n).all(|i| {
        let ci = &cols[i * words..(i + 1) * words];
        (i + 1..n).all(|j| {
            let cj = &cols[j * words..(j + 1) * words];
            // n is even here, so the inner product vanishes iff popcount == n/2
            n % 2 == 0 && ci.iter().zip(cj).map(|(a, b)| (a ^ b).count_ones()).sum::<u32>() == half
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: `MᵀM` by schoolbook integer multiplication.
    fn gram(h: &HadamardMatrix) -> Vec<Vec<i64>> {
        let n = h.order();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|r| h.get(r, i) as i64 * h.get(r, j) as i64).sum())
                    .collect()
            })
            .collect()
    }

    fn is_scaled_identity(g: &[Vec<i64>], n: i64) -> bool {
        g.iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == if i == j { n } else { 0 }))
    }

    #[test]
    fn small_sylvester_matrices() {
        assert_eq!(sylvester(0).unwrap().to_rows(), vec![vec![1]]);
        assert_eq!(sylvester(1).unwrap().to_rows(), vec![vec![1, 1], vec![1, -1]]);
        let h8 = sylvester(3).unwrap();
        assert_eq!(h8.order(), 8);
        assert!(is_scaled_identity(&gram(&h8), 8));
        assert!(h8.first_row_is_ones());
    }

    #[test]
    fn sylvester_matches_oracle_up_to_64() {
        for k in 0..=6 {
            let h = sylvester(k).unwrap();
            assert!(is_scaled_identity(&gram(&h), 1 << k), "k = {k}");
            assert!(h.is_valid());
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(sylvester(14), Err(Error::OrderTooLarge { .. })));
        assert!(matches!(sylvester(80), Err(Error::OrderTooLarge { .. })));
        let big = sylvester(7).unwrap();
        assert!(matches!(kronecker(&big, &big), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn kronecker_examples() {
        let h1 = sylvester(0).unwrap();
        let h2 = sylvester(1).unwrap();
        let h4 = sylvester(2).unwrap();
        assert_eq!(kronecker(&h2, &h2).unwrap(), h4);
        assert_eq!(kronecker(&h1, &h4).unwrap(), h4);
        let h8 = kronecker(&h2, &h4).unwrap();
        assert_eq!(h8.order(), 8);
        assert!(is_scaled_identity(&gram(&h8), 8));
        // H_2 ⊗ H_{2^k} is exactly the Sylvester recursion
        assert_eq!(h8, sylvester(3).unwrap());
    }

    #[test]
    fn normalization() {
        let h4 = sylvester(2).unwrap();
        assert_eq!(normalize_first_row(&h4), h4);

        let mut flipped = h4.clone();
        flipped.negate_column(2);
        assert!(!flipped.first_row_is_ones());
        assert_eq!(normalize_first_row(&flipped), h4);
    }

    #[test]
    fn verify_examples() {
        assert!(verify_hadamard(&sylvester(4).unwrap().to_rows()));
        assert!(!verify_hadamard(&[[1, 1], [1, 1]]));
        assert!(!verify_hadamard(&vec![vec![1i32; 12]; 12]));
        assert!(!verify_hadamard(&[[1, 0], [1, -1]]));
        assert!(!verify_hadamard(&[vec![1, 1], vec![1]]));
        assert!(!verify_hadamard::<i32, Vec<i32>>(&[]));
        assert!(HadamardMatrix::from_rows(&[[1, 1], [1, 1]]).is_err());
    }

    #[test]
    fn available_orders() {
        assert_eq!(HadamardMatrix::of_order(16).unwrap().order(), 16);
        assert!(matches!(HadamardMatrix::of_order(7), Err(Error::UnavailableOrder(7))));
        assert!(matches!(HadamardMatrix::of_order(12), Err(Error::UnavailableOrder(12))));
        assert!(HadamardMatrix::of_order(0).is_err());
    }

    proptest! {
        #[test]
        fn sign_and_permutation_actions_preserve_hadamard(
            k in 1u32..6,
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut h = sylvester(k).unwrap();
            let n = h.order();
            for i in 0..n {
                if rng.random::<bool>() { h.negate_column(i); }
                if rng.random::<bool>() { h.negate_row(i); }
            }
            let mut rp: Vec<usize> = (0..n).collect();
            let mut cp = rp.clone();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let h = h.permute(&rp, &cp);
            prop_assert!(verify_hadamard(&h.to_rows()));
            prop_assert!(is_scaled_identity(&gram(&h), n as i64));
            let normalized = normalize_first_row(&h);
            prop_assert!(normalized.first_row_is_ones());
            prop_assert!(normalized.is_valid());
        }

        #[test]
        fn kronecker_of_sylvester(a in 0u32..5, b in 0u32..5) {
            let h = kronecker(&sylvester(a).unwrap(), &sylvester(b).unwrap()).unwrap();
            prop_assert_eq!(h.order(), 1usize << (a + b));
            prop_assert!(verify_hadamard(&h.to_rows()));
        }
    }
}
