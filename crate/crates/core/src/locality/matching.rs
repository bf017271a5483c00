//! Bipartite perfect matching by augmenting paths.

/// A perfect matching of the square compatibility matrix `compat`
/// (`compat[left][right]`), as `result[left] = right`, if one exists.
pub fn perfect_matching(compat: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = compat.len();
    if compat.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for left in 0..n {
        let mut seen = vec![false; n];
        if !augment(compat, left, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut result = vec![0; n];
    for (right, l) in owner.iter().enumerate() {
        result[l.expect("perfect")] = right;
    }
    Some(result)
}

fn augment(compat: &[Vec<bool>], left: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for right in 0..compat.len() {
        if !compat[left][right] || seen[right] {
            continue;
        }
        seen[right] = true;
        if owner[right].is_none_or(|other| augment(compat, other, seen, owner)) {
            owner[right] = Some(left);
            return true;
        }
    }
    false
}
