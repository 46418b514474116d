//! Set-partition enumeration via restricted growth strings.
//!
//! A restricted growth string (RGS) a_0..a_{n-1} has a_0 = 0 and
//! a_i <= 1 + max(a_0..a_{i-1}); each string encodes one set partition by
//! block label. Enumeration is in lexicographic RGS order, so the all-zeros
//! string (one block) comes first and the identity string 0,1,..,n-1
//! (singletons) comes last.

/// Iterator over all restricted growth strings of length `n`.
pub struct RgsIter {
    a: Vec<usize>,
    m: Vec<usize>, // m[i] = max(a[0..=i])
    done: bool,
}

/// Enumerate all set partitions of {0..n-1} as restricted growth strings.
pub fn partitions(n: usize) -> RgsIter {
    RgsIter {
        a: vec![0; n],
        m: vec![0; n],
        done: n == 0,
    }
}

impl Iterator for RgsIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.a.clone();
        // Advance to the lexicographic successor.
        let n = self.a.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.a[i] <= self.m[i - 1] {
                self.a[i] += 1;
                self.m[i] = self.m[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.m[j] = self.m[i];
                }
                break;
            }
        }
        Some(out)
    }
}

/// Group item indices by RGS block label, in label order.
pub fn rgs_to_blocks(rgs: &[usize]) -> Vec<Vec<usize>> {
    let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); k];
    for (i, &label) in rgs.iter().enumerate() {
        blocks[label].push(i);
    }
    blocks
}

/// Bell number B(n) for small n (number of set partitions).
pub fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 1..=n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_bell_numbers() {
        for (n, expected) in [(1, 1u64), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            assert_eq!(partitions(n).count() as u64, expected);
            assert_eq!(bell(n), expected);
        }
        assert_eq!(bell(10), 115_975);
    }

    #[test]
    fn strings_are_valid_and_ordered() {
        let all: Vec<Vec<usize>> = partitions(4).collect();
        assert_eq!(all[0], vec![0, 0, 0, 0]);
        assert_eq!(all.last().unwrap(), &vec![0, 1, 2, 3]);
        for w in all.windows(2) {
            assert!(w[0] < w[1], "lexicographic order violated");
        }
        for rgs in &all {
            assert_eq!(rgs[0], 0);
            let mut max = 0;
            for &x in rgs {
                assert!(x <= max + 1);
                max = max.max(x);
            }
        }
    }

    #[test]
    fn blocks_cover_and_are_disjoint() {
        for rgs in partitions(5) {
            let blocks = rgs_to_blocks(&rgs);
            let mut seen = [false; 5];
            for b in &blocks {
                assert!(!b.is_empty());
                for &i in b {
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
