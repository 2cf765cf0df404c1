//! Permutation groups acting on a search universe, and the lex-min
//! canonicity test used for orderly generation.
//!
//! A set is canonical when its ascending index list is lexicographically
//! least in its orbit. For equal-size sets that comparison is decided by the
//! least element of the symmetric difference, so images are compared as bit
//! masks. Removing the largest element of a canonical set leaves a canonical
//! set, which is what makes extension by larger items exhaustive.

use crate::code::permutations;

/// Universes larger than this are searched without symmetry.
pub const MAX_UNIVERSE: usize = 4096;
const WORDS: usize = MAX_UNIVERSE / 64;

/// Largest `|G| * |universe|` table that is materialised.
pub const TABLE_CAP: usize = 1 << 24;

#[derive(Debug, Clone)]
pub struct Group {
    size: usize,
    /// `perms[g * size + x]` is the image of item `x` under element `g`.
    perms: Vec<u32>,
    order: usize,
    orbit_min: Vec<u32>,
    /// For each item, the elements sending it to its orbit minimum.
    to_min: Vec<Vec<u32>>,
}

impl Group {
    pub fn trivial(size: usize) -> Self {
        Self {
            size,
            perms: Vec::new(),
            order: 1,
            orbit_min: Vec::new(),
            to_min: Vec::new(),
        }
    }

    /// Builds the group from a full list of its elements.
    pub fn from_perms(size: usize, elems: Vec<Vec<u32>>) -> Self {
        let order = elems.len();
        let perms: Vec<u32> = elems.into_iter().flatten().collect();
        let mut orbit_min: Vec<u32> = (0..size as u32).collect();
        for g in 0..order {
            for x in 0..size {
                let y = perms[g * size + x];
                if y < orbit_min[x] {
                    orbit_min[x] = y;
                }
            }
        }
        let mut to_min = vec![Vec::new(); size];
        for g in 0..order {
            for x in 0..size {
                if perms[g * size + x] == orbit_min[x] {
                    to_min[x].push(g as u32);
                }
            }
        }
        Self {
            size,
            perms,
            order,
            orbit_min,
            to_min,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn image(&self, g: usize, x: u32) -> u32 {
        if self.order == 1 {
            return x;
        }
        self.perms[g * self.size + x as usize]
    }

    /// Whether the ascending list `set` is the least member of its orbit.
    pub fn is_canonical(&self, set: &[u32]) -> bool {
        if self.order == 1 || set.is_empty() {
            return true;
        }
        let least = set.iter().map(|&x| self.orbit_min[x as usize]).min().expect("nonempty");
        if set[0] != least {
            return false;
        }
        let words = self.size.div_ceil(64);
        let mut own = [0u64; WORDS];
        for &x in set {
            own[x as usize / 64] |= 1 << (x % 64);
        }
        // an image below `set` must contain `least`, so only elements
        // sending some member to `least` need checking
        for &s in set {
            if self.orbit_min[s as usize] != least {
                continue;
            }
            for &g in &self.to_min[s as usize] {
                let base = g as usize * self.size;
                let mut img = [0u64; WORDS];
                for &x in set {
                    let y = self.perms[base + x as usize];
                    img[y as usize / 64] |= 1 << (y % 64);
                }
                for w in 0..words {
                    let d = img[w] ^ own[w];
                    if d != 0 {
                        if d & d.wrapping_neg() & img[w] != 0 {
                            return false;
                        }
                        break;
                    }
                }
            }
        }
        true
    }
}

/// Index of a word in lexicographic order (position 0 most significant).
pub fn word_index(word: &[u32], q: usize) -> u32 {
    word.iter().fold(0u32, |acc, &s| acc * q as u32 + s)
}

pub fn index_word(mut idx: u32, n: usize, q: usize) -> Vec<u32> {
    let mut w = vec![0; n];
    for l in (0..n).rev() {
        w[l] = idx % q as u32;
        idx /= q as u32;
    }
    w
}

/// Which symmetries of `[q]^n` a code search uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeSymmetry {
    /// Position permutations and per-position symbol permutations.
    Full,
    /// Per-position symbol permutations.
    Symbols,
    /// Per-position cyclic shifts of the symbols.
    Translations,
    None,
}

impl CodeSymmetry {
    pub fn includes_positions(self) -> bool {
        self == CodeSymmetry::Full
    }
}

fn factorial(k: usize) -> Option<usize> {
    (1..=k).try_fold(1usize, |acc, x| acc.checked_mul(x))
}

/// The largest symmetry group whose table fits under [`TABLE_CAP`].
pub fn code_group(n: usize, q: usize) -> (Group, CodeSymmetry) {
    let size = q.checked_pow(n as u32).unwrap_or(usize::MAX);
    if size > MAX_UNIVERSE {
        return (Group::trivial(size), CodeSymmetry::None);
    }
    let fits = |order: Option<usize>| order.and_then(|o| o.checked_mul(size)).is_some_and(|c| c <= TABLE_CAP);
    let sym = factorial(q).and_then(|f| f.checked_pow(n as u32));
    let full = sym.and_then(|s| factorial(n).and_then(|p| p.checked_mul(s)));
    let kind = if fits(full) {
        CodeSymmetry::Full
    } else if fits(sym) {
        CodeSymmetry::Symbols
    } else if fits(Some(size)) {
        CodeSymmetry::Translations
    } else {
        CodeSymmetry::None
    };
    let pos_perms: Vec<Vec<usize>> = if kind == CodeSymmetry::Full {
        permutations(n)
    } else {
        vec![(0..n).collect()]
    };
    let sym_perms: Vec<Vec<usize>> = match kind {
        CodeSymmetry::Full | CodeSymmetry::Symbols => permutations(q),
        CodeSymmetry::Translations => (0..q).map(|a| (0..q).map(|s| (s + a) % q).collect()).collect(),
        CodeSymmetry::None => vec![(0..q).collect()],
    };
    let words: Vec<Vec<u32>> = (0..size as u32).map(|i| index_word(i, n, q)).collect();
    let mut elems = Vec::new();
    let mut choice = vec![0usize; n];
    for pi in &pos_perms {
        loop {
            let perm: Vec<u32> = words
                .iter()
                .map(|w| {
                    let mut img = vec![0u32; n];
                    for l in 0..n {
                        img[pi[l]] = sym_perms[choice[l]][w[l] as usize] as u32;
                    }
                    word_index(&img, q)
                })
                .collect();
            elems.push(perm);
            // odometer over the per-position symbol permutations
            let mut l = 0;
            while l < n && choice[l] + 1 == sym_perms.len() {
                choice[l] = 0;
                l += 1;
            }
            if l == n {
                break;
            }
            choice[l] += 1;
        }
    }
    (Group::from_perms(size, elems), kind)
}

/// Subsets of `[n]` as bit masks, ordered by weight and then by value.
pub fn family_universe(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks
}

/// `S_n` acting on [`family_universe`], or the trivial group when too big.
pub fn family_group(n: usize, universe: &[u64]) -> Group {
    let size = universe.len();
    if size > MAX_UNIVERSE || factorial(n).and_then(|f| f.checked_mul(size)).is_none_or(|c| c > TABLE_CAP) {
        return Group::trivial(size);
    }
    let mut pos = vec![0u32; 1 << n];
    for (i, &m) in universe.iter().enumerate() {
        pos[m as usize] = i as u32;
    }
    let elems = permutations(n)
        .into_iter()
        .map(|p| {
            universe
                .iter()
                .map(|&m| {
                    let img = (0..n).filter(|&b| m >> b & 1 == 1).fold(0u64, |acc, b| acc | 1 << p[b]);
                    pos[img as usize]
                })
                .collect()
        })
        .collect();
    Group::from_perms(size, elems)
}
