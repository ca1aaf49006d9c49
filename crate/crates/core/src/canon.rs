//! Rooted breadth-first canonical codes for finite structures given as a list
//! of functions on `0..n` that generate a connected action.

/// Minimal code over every root and every supplied generator list.
///
/// Each entry of `variants` is one presentation of the structure (for maps:
/// the structure and its mirror image). All generator arrays must have the
/// same length `n > 0`.
pub(crate) fn minimal_code(variants: &[&[&[usize]]]) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for gens in variants {
        let n = gens[0].len();
        for root in 0..n {
            if let Some(code) = rooted_code(gens, root, best.as_deref()) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

/// Code from one root, or `None` as soon as it is known to exceed `bound`.
fn rooted_code(gens: &[&[usize]], root: usize, bound: Option<&[u32]>) -> Option<Vec<u32>> {
    let n = gens[0].len();
    let mut number = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut code = Vec::with_capacity(n * gens.len() + 1);
    number[root] = 0;
    order.push(root);
    let mut strictly_less = bound.is_none();
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for g in gens {
            let y = g[x];
            if number[y] == u32::MAX {
                number[y] = order.len() as u32;
                order.push(y);
            }
            let v = number[y];
            if !strictly_less {
                let b = bound.expect("bound present")[code.len()];
                if v > b {
                    return None;
                }
                strictly_less = v < b;
            }
            code.push(v);
        }
    }
    // Unreached elements would make codes of different structures collide.
    code.push(order.len() as u32);
    if !strictly_less && bound.is_some_and(|b| code.as_slice() >= b) {
        return None;
    }
    Some(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_codes_ignore_rotation() {
        let a = [1, 2, 3, 0];
        let b = [3, 0, 1, 2];
        assert_eq!(minimal_code(&[&[&a]]), minimal_code(&[&[&b]]));
    }

    #[test]
    fn distinguishes_cycle_types() {
        let four = [1, 2, 3, 0];
        let two_two = [1, 0, 3, 2];
        let link = [2, 3, 0, 1];
        assert_ne!(
            minimal_code(&[&[&four, &link]]),
            minimal_code(&[&[&two_two, &link]])
        );
    }
}
