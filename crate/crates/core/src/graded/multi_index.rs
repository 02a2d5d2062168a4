use std::cmp::Ordering;
use std::fmt;

/// A symmetric multi-index over the base coordinates, stored as one count per
/// coordinate. `[2, 0, 1]` is the index `x0 x0 x2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex {
    counts: Vec<u16>,
}

impl MultiIndex {
    /// The empty multi-index in base dimension `n`.
    pub fn zero(n: usize) -> Self {
        MultiIndex { counts: vec![0; n] }
    }

    pub fn from_counts(counts: Vec<u16>) -> Self {
        MultiIndex { counts }
    }

    /// The multi-index of a single coordinate.
    pub fn unit(n: usize, coord: usize) -> Self {
        assert!(coord < n, "coordinate {coord} out of range for base dimension {n}");
        let mut counts = vec![0; n];
        counts[coord] = 1;
        MultiIndex { counts }
    }

    /// Builds a multi-index from a list of coordinates; order is irrelevant.
    pub fn from_coords(n: usize, coords: &[usize]) -> Self {
        let mut idx = MultiIndex::zero(n);
        for &c in coords {
            idx = idx.plus_coord(c);
        }
        idx
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u16] {
        &self.counts
    }

    /// `|Λ|`, the total order.
    pub fn order(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn plus_coord(&self, coord: usize) -> Self {
        assert!(
            coord < self.dim(),
            "coordinate {coord} out of range for base dimension {}",
            self.dim()
        );
        let mut counts = self.counts.clone();
        counts[coord] += 1;
        MultiIndex { counts }
    }

    pub fn plus(&self, other: &MultiIndex) -> Self {
        assert_eq!(self.dim(), other.dim(), "multi-index dimension mismatch");
        MultiIndex {
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self − other` when `other ≤ self` component-wise.
    pub fn checked_minus(&self, other: &MultiIndex) -> Option<Self> {
        assert_eq!(self.dim(), other.dim(), "multi-index dimension mismatch");
        let mut counts = Vec::with_capacity(self.dim());
        for (a, b) in self.counts.iter().zip(&other.counts) {
            counts.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex { counts })
    }

    /// The coordinates of the index in ascending order, with repetition.
    pub fn coords(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order());
        for (c, &k) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(c, k as usize));
        }
        out
    }

    /// Every multi-index in dimension `n` of order at most `max_order`, in
    /// canonical order.
    pub fn all_up_to(n: usize, max_order: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(n)];
        let mut frontier = vec![MultiIndex::zero(n)];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for idx in &frontier {
                // Only extend at or after the last used coordinate so each
                // multiset is produced once.
                let last = idx.counts.iter().rposition(|&c| c > 0).unwrap_or(0);
                for c in last..n {
                    next.push(idx.plus_coord(c));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }

    /// Every `Σ ≤ self` component-wise (the sub-multisets).
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &k in &self.counts {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for prefix in &out {
                for j in 0..=k {
                    let mut p = prefix.clone();
                    p.push(j);
                    next.push(p);
                }
            }
            out = next;
        }
        let mut out: Vec<MultiIndex> = out.into_iter().map(MultiIndex::from_counts).collect();
        out.sort();
        out
    }

    /// Number of distinct orderings of the index, `|Λ|! / Π λ_i!`.
    pub fn multiplicity(&self) -> u64 {
        let mut num = factorial(self.order());
        for &k in &self.counts {
            num /= factorial(k as usize);
        }
        num
    }

    pub fn render(&self, coord_names: &[String]) -> String {
        let names: Vec<&str> = self
            .coords()
            .into_iter()
            .map(|c| coord_names.get(c).map(String::as_str).unwrap_or("?"))
            .collect();
        format!("[{}]", names.join(","))
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl Ord for MultiIndex {
    // Graded lexicographic: total order first, then counts with earlier
    // coordinates ranked higher.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| other.counts.cmp(&self.counts))
            .then_with(|| self.dim().cmp(&other.dim()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.coords().iter().map(|c| format!("x{c}")).collect();
        write!(f, "[{}]", names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_sum_of_counts() {
        let idx = MultiIndex::from_coords(3, &[0, 2, 0]);
        assert_eq!(idx.counts(), &[2, 0, 1]);
        assert_eq!(idx.order(), 3);
        assert_eq!(idx.coords(), vec![0, 0, 2]);
    }

    #[test]
    fn addition_commutes() {
        let a = MultiIndex::from_coords(2, &[0, 1]);
        let b = MultiIndex::from_coords(2, &[1, 1]);
        assert_eq!(a.plus(&b), b.plus(&a));
        assert_eq!(a.plus(&b).counts(), &[1, 3]);
    }

    #[test]
    fn enumeration_counts() {
        // Multisets of size ≤ 3 over 2 letters: 1 + 2 + 3 + 4.
        assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
        assert_eq!(MultiIndex::all_up_to(1, 4).len(), 5);
        let idx = MultiIndex::from_counts(vec![2, 1]);
        assert_eq!(idx.sub_indices().len(), 6);
        assert_eq!(idx.multiplicity(), 3);
    }

    #[test]
    fn canonical_order_is_graded() {
        let zero = MultiIndex::zero(2);
        let x0 = MultiIndex::unit(2, 0);
        let x1 = MultiIndex::unit(2, 1);
        let x00 = MultiIndex::from_coords(2, &[0, 0]);
        assert!(zero < x0 && x0 < x1 && x1 < x00);
        assert_eq!(x00.to_string(), "[x0,x0]");
        assert_eq!(zero.to_string(), "[]");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(factorial(5), 120);
    }
}
