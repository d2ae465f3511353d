//! 64-bit and multi-word truth table helpers.
//!
//! Local node functions are stored as 64-bit words: for a gate of arity
//! `k`, bit `j` holds `f(j mod 2^k)` where fanin 0 is the least
//! significant input variable. The `2^k`-bit pattern is tiled to fill
//! all 64 bits, so bits `j` and `j + 2^k` are always equal.

/// Canonical single-variable patterns over 6 variables.
pub const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Tiles the low `2^k` bits of `pattern` across a full 64-bit word.
pub fn tile(pattern: u64, k: usize) -> u64 {
    assert!(k <= 6);
    if k == 6 {
        return pattern;
    }
    let span = 1usize << k;
    let mut tt = pattern & mask_low(span);
    let mut width = span;
    while width < 64 {
        tt |= tt << width;
        width *= 2;
    }
    tt
}

fn mask_low(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Evaluates a local truth table on one input assignment.
pub fn eval(tt: u64, inputs: &[bool]) -> bool {
    let mut idx = 0usize;
    for (i, &b) in inputs.iter().enumerate() {
        if b {
            idx |= 1 << i;
        }
    }
    (tt >> (idx & 63)) & 1 == 1
}

/// Builds a tiled truth table from a predicate over `k` input bits.
pub fn from_fn(k: usize, f: impl Fn(usize) -> bool) -> u64 {
    assert!(k <= 6);
    let mut pattern = 0u64;
    for j in 0..(1usize << k) {
        if f(j) {
            pattern |= 1u64 << j;
        }
    }
    tile(pattern, k)
}

/// True if bits `j` and `j + 2^k` agree for all `j` (the tiling invariant).
pub fn is_tiled(tt: u64, k: usize) -> bool {
    tile(tt, k) == tt
}

/// Re-expresses a function of `m` variables over a wider set of `n <= 6`
/// variables; `map[i]` gives the new position of old variable `i`.
pub fn remap(tt: u64, m: usize, map: &[usize], n: usize) -> u64 {
    debug_assert_eq!(map.len(), m);
    debug_assert!(n <= 6);
    from_fn(n, |j| {
        let mut old = 0usize;
        for (i, &p) in map.iter().enumerate() {
            if (j >> p) & 1 == 1 {
                old |= 1 << i;
            }
        }
        (tt >> old) & 1 == 1
    })
}

/// Drops vacuous variables: returns the compressed table, its new arity,
/// and the original positions of the surviving variables.
pub fn compress(tt: u64, k: usize) -> (u64, usize, Vec<usize>) {
    let mut support = Vec::new();
    for i in 0..k {
        let mask = VAR_MASKS[i];
        let hi = tt & mask;
        let lo = (tt & !mask) << (1 << i);
        if hi != lo {
            support.push(i);
        }
    }
    let m = support.len();
    let compressed = from_fn(m, |j| {
        let mut full = 0usize;
        for (new, &old) in support.iter().enumerate() {
            if (j >> new) & 1 == 1 {
                full |= 1 << old;
            }
        }
        (tt >> full) & 1 == 1
    });
    (compressed, m, support)
}

/// Truth table over an arbitrary number of variables, packed 64
/// assignments per word. Used for cone collapsing and exhaustive
/// simulation where more than 6 inputs are involved.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Table {
    pub nvars: usize,
    pub words: Vec<u64>,
}

impl Table {
    pub fn zeros(nvars: usize) -> Table {
        Table {
            nvars,
            words: vec![0; word_count(nvars)],
        }
    }

    pub fn ones(nvars: usize) -> Table {
        let mut t = Table::zeros(nvars);
        for w in &mut t.words {
            *w = u64::MAX;
        }
        t.trim();
        t
    }

    /// The projection onto variable `i`.
    pub fn var(nvars: usize, i: usize) -> Table {
        assert!(i < nvars);
        let mut t = Table::zeros(nvars);
        if i < 6 {
            for w in &mut t.words {
                *w = VAR_MASKS[i];
            }
        } else {
            for (j, w) in t.words.iter_mut().enumerate() {
                if (j >> (i - 6)) & 1 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        t.trim();
        t
    }

    pub fn bit(&self, idx: usize) -> bool {
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    pub fn set_bit(&mut self, idx: usize, value: bool) {
        if value {
            self.words[idx / 64] |= 1 << (idx % 64);
        } else {
            self.words[idx / 64] &= !(1 << (idx % 64));
        }
    }

    pub fn len(&self) -> usize {
        1 << self.nvars
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn not(&self) -> Table {
        let mut t = Table {
            nvars: self.nvars,
            words: self.words.iter().map(|w| !w).collect(),
        };
        t.trim();
        t
    }

    pub fn and(&self, other: &Table) -> Table {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Table) -> Table {
        self.zip(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Table) -> Table {
        self.zip(other, |a, b| a ^ b)
    }

    fn zip(&self, other: &Table, f: impl Fn(u64, u64) -> u64) -> Table {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut t = Table {
            nvars: self.nvars,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        };
        t.trim();
        t
    }

    /// Positive cofactor with respect to variable `i` (the result no
    /// longer depends on `i`).
    pub fn cofactor(&self, i: usize, value: bool) -> Table {
        let mut t = self.clone();
        if i < 6 {
            let mask = VAR_MASKS[i];
            let shift = 1usize << i;
            for w in &mut t.words {
                if value {
                    let hi = *w & mask;
                    *w = hi | (hi >> shift);
                } else {
                    let lo = *w & !mask;
                    *w = lo | (lo << shift);
                }
            }
        } else {
            let stride = 1usize << (i - 6);
            let n = t.words.len();
            let mut j = 0;
            while j < n {
                for off in 0..stride {
                    let (src, dst) = if value {
                        (j + stride + off, j + off)
                    } else {
                        (j + off, j + stride + off)
                    };
                    t.words[dst] = t.words[src];
                }
                j += 2 * stride;
            }
        }
        t
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.cofactor(i, false) != self.cofactor(i, true)
    }

    pub fn is_const0(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_const1(&self) -> bool {
        *self == Table::ones(self.nvars)
    }

    /// Masks out bits above `2^nvars` when fewer than 64 assignments exist.
    fn trim(&mut self) {
        if self.nvars < 6 {
            let m = mask_low(1 << self.nvars);
            self.words[0] &= m;
        }
    }
}

fn word_count(nvars: usize) -> usize {
    if nvars >= 6 {
        1 << (nvars - 6)
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiling() {
        assert_eq!(tile(0b1000, 2), 0x8888_8888_8888_8888);
        assert_eq!(tile(0b01, 1), 0x5555_5555_5555_5555);
        assert!(is_tiled(0xE8E8_E8E8_E8E8_E8E8, 3));
        assert!(!is_tiled(0xE8, 3));
    }

    #[test]
    fn eval_and2() {
        let and2 = tile(0b1000, 2);
        assert!(!eval(and2, &[false, false]));
        assert!(!eval(and2, &[true, false]));
        assert!(eval(and2, &[true, true]));
    }

    #[test]
    fn compress_drops_vacuous_vars() {
        // f(a, b, c) = a & c, b vacuous
        let f = from_fn(3, |j| (j & 1 != 0) && (j & 4 != 0));
        let (g, m, support) = compress(f, 3);
        assert_eq!(m, 2);
        assert_eq!(support, vec![0, 2]);
        assert_eq!(g, tile(0b1000, 2));
    }

    #[test]
    fn table_cofactors() {
        // 8-var majority of vars 0, 6, 7 exercises both word layouts.
        let a = Table::var(8, 0);
        let b = Table::var(8, 6);
        let c = Table::var(8, 7);
        let maj = a.and(&b).or(&a.and(&c)).or(&b.and(&c));
        assert!(maj.depends_on(0));
        assert!(maj.depends_on(7));
        assert!(!maj.depends_on(3));
        assert_eq!(maj.cofactor(6, true).cofactor(7, true), Table::ones(8));
    }
}
