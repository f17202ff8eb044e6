//! Canonical enumeration of strictly increasing index tuples and permutation
//! signs. Structure constants and cochain tables are stored only on these
//! canonical tuples; every other ordering is recovered by sign.

/// Sign of sorting a pair: `Some((canonical, sign))`, `None` when `i == j`.
pub fn sort2(i: usize, j: usize) -> Option<([usize; 2], i64)> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Some(([i, j], 1)),
        std::cmp::Ordering::Greater => Some(([j, i], -1)),
        std::cmp::Ordering::Equal => None,
    }
}

/// Sign of sorting a triple; `None` when two indices coincide.
pub fn sort3(i: usize, j: usize, k: usize) -> Option<([usize; 3], i64)> {
    if i == j || j == k || i == k {
        return None;
    }
    let mut t = [i, j, k];
    let mut sign = 1i64;
    // Three-element bubble sort; each swap flips the sign.
    if t[0] > t[1] {
        t.swap(0, 1);
        sign = -sign;
    }
    if t[1] > t[2] {
        t.swap(1, 2);
        sign = -sign;
    }
    if t[0] > t[1] {
        t.swap(0, 1);
        sign = -sign;
    }
    Some((t, sign))
}

/// All pairs i < j over `0..dim`, lexicographic.
pub fn pairs(dim: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            out.push([i, j]);
        }
    }
    out
}

/// All triples i < j < k over `0..dim`, lexicographic.
pub fn triples(dim: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            for k in (j + 1)..dim {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// Position of the pair `[i, j]` (i < j) in [`pairs`].
pub fn pair_index(dim: usize, pair: [usize; 2]) -> usize {
    let [i, j] = pair;
    debug_assert!(i < j && j < dim);
    // Pairs starting below i: sum_{a<i} (dim-1-a).
    i * (2 * dim - i - 1) / 2 + (j - i - 1)
}

/// Position of the triple `[i, j, k]` (i < j < k) in [`triples`].
pub fn triple_index(dim: usize, triple: [usize; 3]) -> usize {
    let [i, j, k] = triple;
    debug_assert!(i < j && j < k && k < dim);
    let choose3 = |n: usize| {
        if n < 3 {
            0
        } else {
            n * (n - 1) * (n - 2) / 6
        }
    };
    let choose2 = |n: usize| if n < 2 { 0 } else { n * (n - 1) / 2 };
    // Triples with first index below i, then pairs (j,k) within the tail.
    (choose3(dim) - choose3(dim - i)) + (choose2(dim - i - 1) - choose2(dim - j)) + (k - j - 1)
}

pub fn pair_count(dim: usize) -> usize {
    dim * dim.saturating_sub(1) / 2
}

pub fn triple_count(dim: usize) -> usize {
    if dim < 3 {
        0
    } else {
        dim * (dim - 1) * (dim - 2) / 6
    }
}
