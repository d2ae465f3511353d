//! Shannon-decomposition resynthesis of a local function into AND
//! nodes. Structural hashing in the target graph provides node reuse
//! for free, so rebuilding a cut function shares logic with the rest of
//! the network wherever possible.

use super::saig::{Lit, Saig, LIT_FALSE, LIT_TRUE};
use crate::tt::Table;

/// Builds `function` over the literals `leaves` (leaf `i` is variable
/// `i` of the table) and returns the root literal. Decomposes on the
/// highest-index variable in the support so sibling cofactors stay
/// aligned with the table layout.
pub fn build(g: &mut Saig, function: &Table, leaves: &[Lit]) -> Lit {
    debug_assert!(leaves.len() >= function.nvars);
    if function.is_const0() {
        return LIT_FALSE;
    }
    if function.is_const1() {
        return LIT_TRUE;
    }
    // single-literal functions
    let support: Vec<usize> = (0..function.nvars)
        .filter(|&i| function.depends_on(i))
        .collect();
    if support.len() == 1 {
        let i = support[0];
        let v = Table::var(function.nvars, i);
        if *function == v {
            return leaves[i];
        }
        return leaves[i].not();
    }
    let top = *support.last().unwrap();
    let f0 = function.cofactor(top, false);
    let f1 = function.cofactor(top, true);
    let x = leaves[top];
    if f0.is_const0() {
        let hi = build(g, &f1, leaves);
        return g.and(x, hi);
    }
    if f1.is_const0() {
        let lo = build(g, &f0, leaves);
        return g.and(x.not(), lo);
    }
    if f0.is_const1() {
        let hi = build(g, &f1, leaves);
        return g.or(x.not(), hi);
    }
    if f1.is_const1() {
        let lo = build(g, &f0, leaves);
        return g.or(x, lo);
    }
    if f0 == f1.not() {
        let lo = build(g, &f0, leaves);
        return g.xor(x, lo);
    }
    let hi = build(g, &f1, leaves);
    let lo = build(g, &f0, leaves);
    g.mux(x, hi, lo)
}

/// Convenience wrapper for single-word (up to six variable) functions.
pub fn build_u64(g: &mut Saig, mut tt: u64, nvars: usize, leaves: &[Lit]) -> Lit {
    if nvars < 6 {
        // Table keeps bits above 2^nvars cleared
        tt &= (1u64 << (1 << nvars)) - 1;
    }
    let mut t = Table::zeros(nvars);
    t.words[0] = tt;
    build(g, &t, leaves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tt;

    fn eval_lit(g: &Saig, lit: Lit, pi_values: &[bool]) -> bool {
        let lit = g.resolve(lit);
        let v = lit.var();
        let base = if v == 0 {
            false
        } else if (v as usize) <= g.num_pis() {
            pi_values[v as usize - 1]
        } else {
            let (a, b) = g.fanins(v);
            eval_lit(g, a, pi_values) && eval_lit(g, b, pi_values)
        };
        base ^ lit.compl()
    }

    #[test]
    fn rebuilds_every_three_input_function() {
        for f in 0u64..256 {
            let tt = tt::tile(f, 3);
            let mut g = Saig::new("t", vec!["a".into(), "b".into(), "c".into()]);
            let leaves = [g.pi_lit(0), g.pi_lit(1), g.pi_lit(2)];
            let root = build_u64(&mut g, tt, 3, &leaves);
            for j in 0..8usize {
                let vals = [j & 1 == 1, j & 2 == 2, j & 4 == 4];
                assert_eq!(
                    eval_lit(&g, root, &vals),
                    (tt >> j) & 1 == 1,
                    "function {f:#x} minterm {j}"
                );
            }
        }
    }

    #[test]
    fn xor_decomposition_is_compact() {
        let mut g = Saig::new("t", vec!["a".into(), "b".into()]);
        let leaves = [g.pi_lit(0), g.pi_lit(1)];
        let root = build_u64(&mut g, tt::tile(0x6, 2), 2, &leaves);
        assert!(g.and_count() <= 3);
        for j in 0..4usize {
            let vals = [j & 1 == 1, j & 2 == 2];
            assert_eq!(eval_lit(&g, root, &vals), (j & 1) ^ (j >> 1) == 1);
        }
    }
}
