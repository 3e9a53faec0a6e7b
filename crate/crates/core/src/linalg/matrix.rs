//! Exact dense linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

pub type Vector = Vec<Rational>;

/// Linear map between labelled bases; `entries[t][s]` is the coefficient of
/// target basis element `t` in the image of source basis element `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    source: Vec<String>,
    target: Vec<String>,
    entries: Vec<Vec<Rational>>,
}

/// Output of [`rank_kernel_image`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    /// Basis of the kernel, as vectors in source coordinates.
    pub kernel: Vec<Vector>,
    /// Basis of the image, as vectors in target coordinates (pivot columns).
    pub image: Vec<Vector>,
}

impl LinearMap {
    pub fn new(source: Vec<String>, target: Vec<String>, entries: Vec<Vec<Rational>>) -> Self {
        assert_eq!(entries.len(), target.len(), "row count must match target basis");
        for row in &entries {
            assert_eq!(row.len(), source.len(), "column count must match source basis");
        }
        LinearMap { source, target, entries }
    }

    /// Build from columns (images of the source basis).
    pub fn from_columns(source: Vec<String>, target: Vec<String>, columns: Vec<Vector>) -> Self {
        let mut entries = vec![vec![Rational::zero(); source.len()]; target.len()];
        for (s, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), target.len());
            for (t, v) in col.into_iter().enumerate() {
                entries[t][s] = v;
            }
        }
        LinearMap::new(source, target, entries)
    }

    pub fn zero(source: Vec<String>, target: Vec<String>) -> Self {
        let entries = vec![vec![Rational::zero(); source.len()]; target.len()];
        LinearMap { source, target, entries }
    }

    pub fn identity(basis: Vec<String>) -> Self {
        let n = basis.len();
        let mut entries = vec![vec![Rational::zero(); n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        LinearMap { source: basis.clone(), target: basis, entries }
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn source_dim(&self) -> usize {
        self.source.len()
    }

    pub fn target_dim(&self) -> usize {
        self.target.len()
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn entry(&self, t: usize, s: usize) -> &Rational {
        &self.entries[t][s]
    }

    pub fn column(&self, s: usize) -> Vector {
        self.entries.iter().map(|row| row[s].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(Zero::is_zero))
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.source_dim());
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).filter(|(_, b)| !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(other.target_dim(), self.source_dim(), "dimension mismatch in composition");
        let columns = (0..other.source_dim()).map(|s| self.apply(&other.column(s))).collect();
        LinearMap::from_columns(other.source.clone(), self.target.clone(), columns)
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        assert_eq!(self.source_dim(), other.source_dim());
        assert_eq!(self.target_dim(), other.target_dim());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        LinearMap { source: self.source.clone(), target: self.target.clone(), entries }
    }

    pub fn scale(&self, c: &Rational) -> LinearMap {
        let entries = self.entries.iter().map(|row| row.iter().map(|x| x * c).collect()).collect();
        LinearMap { source: self.source.clone(), target: self.target.clone(), entries }
    }

    /// Same entries, compared ignoring labels.
    pub fn same_matrix(&self, other: &LinearMap) -> bool {
        self.entries == other.entries
            && self.source_dim() == other.source_dim()
            && self.target_dim() == other.target_dim()
    }

    pub fn rank(&self) -> usize {
        bareiss_echelon(&self.integer_rows()).pivots.len()
    }

    /// Inverse of a square map, `None` when singular.
    pub fn inverse(&self) -> Option<LinearMap> {
        let n = self.source_dim();
        if n != self.target_dim() {
            return None;
        }
        let mut rref = Rref::with_tags(n, n);
        for (t, row) in self.entries.iter().enumerate() {
            let mut tag = vec![Rational::zero(); n];
            tag[t] = Rational::one();
            rref.insert_tagged(row.clone(), tag);
        }
        if rref.rank() != n {
            return None;
        }
        // Row t of A corresponds to tag e_t; reduced rows are e_pivot = sum c_t A_t,
        // so the tag rows form A^{-1} indexed by pivot.
        let mut inv = vec![vec![Rational::zero(); n]; n];
        for (pivot, row) in rref.rows() {
            inv[*pivot] = row[n..].to_vec();
        }
        Some(LinearMap { source: self.target.clone(), target: self.source.clone(), entries: inv })
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.iter().map(|row| clear_denominators(row)).collect()
    }
}

/// Scale a rational row to a primitive integer row with the same span.
pub(crate) fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

/// Fraction-free (Bareiss) forward elimination with row pivoting.
fn bareiss_echelon(input: &[Vec<BigInt>]) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = input.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        // Columns left of c in rows below r are already zero.
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon { rows: m, pivots }
}

/// Rank, kernel and image of a map by fraction-free elimination.
pub fn rank_kernel_image(map: &LinearMap) -> RankKernelImage {
    let echelon = bareiss_echelon(&map.integer_rows());
    let ncols = map.source_dim();
    let rank = echelon.pivots.len();
    let mut is_pivot = vec![false; ncols];
    for &p in &echelon.pivots {
        is_pivot[p] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rational::zero(); ncols];
        x[free] = Rational::one();
        for (k, &p) in echelon.pivots.iter().enumerate().rev() {
            let row = &echelon.rows[k];
            let s: Rational = (p + 1..ncols)
                .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                .map(|j| Rational::from_integer(row[j].clone()) * &x[j])
                .sum();
            x[p] = -s / Rational::from_integer(row[p].clone());
        }
        kernel.push(x);
    }
    let image = echelon.pivots.iter().map(|&c| map.column(c)).collect();
    RankKernelImage { rank, kernel, image }
}

/// Incrementally maintained reduced row echelon form. Rows may carry extra
/// "tag" columns that record how each row was combined; pivots are only
/// chosen among the leading `ncols` columns.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    ncols: usize,
    ntags: usize,
    rows: Vec<(usize, Vector)>,
    pivot_of_col: Vec<Option<usize>>,
}

impl Rref {
    pub fn new(ncols: usize) -> Self {
        Rref::with_tags(ncols, 0)
    }

    pub fn with_tags(ncols: usize, ntags: usize) -> Self {
        Rref { ncols, ntags, rows: Vec::new(), pivot_of_col: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &Vector)> {
        self.rows.iter().map(|(p, r)| (p, r))
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col].is_some()
    }

    /// Subtract multiples of pivot rows so `v` vanishes on pivot columns.
    fn eliminate(&self, v: &mut [Rational]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
    }

    pub fn reduce(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.ncols);
        let mut w = v.to_vec();
        w.resize(self.ncols + self.ntags, Rational::zero());
        self.eliminate(&mut w);
        w.truncate(self.ncols);
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Insert a row; returns `true` if it was independent of the span.
    pub fn insert(&mut self, v: Vector) -> bool {
        let tags = vec![Rational::zero(); self.ntags];
        self.insert_tagged(v, tags)
    }

    pub fn insert_tagged(&mut self, v: Vector, tag: Vector) -> bool {
        assert_eq!(v.len(), self.ncols);
        assert_eq!(tag.len(), self.ntags);
        let mut w = v;
        w.extend(tag);
        self.eliminate(&mut w);
        let Some(p) = (0..self.ncols).find(|&c| !w[c].is_zero()) else { return false };
        let inv = Rational::one() / w[p].clone();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        self.pivot_of_col[p] = Some(self.rows.len());
        self.rows.push((p, w));
        true
    }

    /// Write `v` as a combination of the inserted rows, using the tag columns
    /// (which must have been initialised to unit vectors). `None` if `v` is
    /// outside the span.
    pub fn decompose(&self, v: &[Rational]) -> Option<Vector> {
        let mut w = v.to_vec();
        w.resize(self.ncols + self.ntags, Rational::zero());
        self.eliminate(&mut w);
        if w[..self.ncols].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(w[self.ncols..].iter().map(|x| -x.clone()).collect())
    }
}

/// Coordinates relative to an independent family of vectors.
#[derive(Clone, Debug)]
pub struct Coordinates {
    rref: Rref,
    len: usize,
}

impl Coordinates {
    /// Returns `None` if the family is dependent.
    pub fn new(ambient: usize, family: &[Vector]) -> Option<Self> {
        let mut rref = Rref::with_tags(ambient, family.len());
        for (i, v) in family.iter().enumerate() {
            let mut tag = vec![Rational::zero(); family.len()];
            tag[i] = Rational::one();
            if !rref.insert_tagged(v.clone(), tag) {
                return None;
            }
        }
        Some(Coordinates { rref, len: family.len() })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn of(&self, v: &[Rational]) -> Option<Vector> {
        self.rref.decompose(v)
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub(crate) fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
