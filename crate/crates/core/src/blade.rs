use std::fmt;

/// A basis blade `e_I` of the exterior algebra, stored as a bitmask.
///
/// Bit `i - 1` is set iff `e_i` is a factor. The canonical blade orders its
/// factors by increasing index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Blade(u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub const fn from_bits(bits: u32) -> Self {
        Blade(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// The blade `e_i` for a 1-based index.
    pub fn vector(index: usize) -> Self {
        debug_assert!((1..=32).contains(&index));
        Blade(1 << (index - 1))
    }

    /// The top blade `e_{12...n}`.
    pub fn pseudoscalar(dim: usize) -> Self {
        Blade(((1u64 << dim) - 1) as u32)
    }

    /// Canonicalizes a product of 1-based basis vectors given in any order.
    ///
    /// Returns the permutation sign and the blade, or `None` when an index
    /// repeats (the wedge then vanishes).
    pub fn from_indices(indices: &[usize]) -> Option<(i32, Blade)> {
        let mut sign = 1;
        let mut bits = 0u32;
        for &i in indices {
            let b = Blade::vector(i);
            if bits & b.0 != 0 {
                return None;
            }
            sign *= reorder_sign(bits, b.0);
            bits |= b.0;
        }
        Some((sign, Blade(bits)))
    }

    /// Ascending 1-based factor indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    pub fn fits(self, dim: usize) -> bool {
        dim >= 32 || self.0 >> dim == 0
    }

    pub fn complement(self, dim: usize) -> Blade {
        Blade(Blade::pseudoscalar(dim).0 & !self.0)
    }

    /// Ordering used for display: by grade, then lexicographically on indices.
    pub fn display_key(self) -> (usize, Vec<usize>) {
        (self.grade(), self.indices())
    }

    /// All blades of grade `k` in `n` dimensions, in lexicographic index order.
    pub fn of_grade(n: usize, k: usize) -> Vec<Blade> {
        let mut out: Vec<Blade> = (0u32..1 << n)
            .filter(|b| b.count_ones() as usize == k)
            .map(Blade)
            .collect();
        out.sort_by_key(|b| b.indices());
        out
    }
}

/// Sign picked up when the concatenated word `e_a e_b` is sorted into
/// canonical order, counting one transposition per inverted pair.
pub fn reorder_sign(a: u32, b: u32) -> i32 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1
    } else {
        -1
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = self.indices();
        if idx.is_empty() {
            return write!(f, "1");
        }
        if idx.iter().all(|&i| i < 10) {
            write!(f, "e")?;
            for i in idx {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            write!(f, "e{{{}}}", parts.join(","))
        }
    }
}
