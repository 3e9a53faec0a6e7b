//! Index bookkeeping for exterior powers of a free module with a fixed basis.

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for j in start..n {
            if n - j < k - current.len() {
                break;
            }
            current.push(j);
            go(j + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `e_j ^ e_S = sign * e_{S + j}`; `None` if `j` is already in `S`.
pub(crate) fn wedge_front(j: usize, set: &[usize]) -> Option<(i64, Vec<usize>)> {
    if set.contains(&j) {
        return None;
    }
    let before = set.iter().filter(|&&s| s < j).count();
    let mut merged = set.to_vec();
    merged.insert(before, j);
    Some((if before % 2 == 0 { 1 } else { -1 }, merged))
}

/// Remove the element at position `t`, with the sign `(-1)^t` of moving it
/// to the front first.
pub(crate) fn remove_at(set: &[usize], t: usize) -> (i64, Vec<usize>) {
    let mut rest = set.to_vec();
    rest.remove(t);
    (if t.is_multiple_of(2) { 1 } else { -1 }, rest)
}

/// `d x_S` style label, e.g. `dx^dy`, or `1` for the empty set.
pub(crate) fn wedge_label(prefix: &str, names: &[String], set: &[usize]) -> String {
    if set.is_empty() {
        return "1".to_string();
    }
    set.iter().map(|&j| format!("{prefix}{}", names[j])).collect::<Vec<_>>().join("^")
}
