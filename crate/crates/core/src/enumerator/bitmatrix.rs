use std::collections::TryReserveError;

/// Dense row-major bit matrix; each row is padded to a whole number of `u64`
/// words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn try_new(rows: usize, cols: usize) -> Result<Self, TryReserveError> {
        let words_per_row = cols.div_ceil(64);
        let len = rows * words_per_row;
        let mut data = Vec::new();
        data.try_reserve_exact(len)?;
        data.resize(len, 0);
        Ok(BitMatrix {
            rows,
            cols,
            words_per_row,
            data,
        })
    }

    pub(crate) fn from_words(rows: usize, cols: usize, data: Vec<u64>) -> Option<Self> {
        let words_per_row = cols.div_ceil(64);
        if data.len() != rows * words_per_row {
            return None;
        }
        Some(BitMatrix {
            rows,
            cols,
            words_per_row,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words_per_row + c / 64] |= 1 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn words(&self) -> &[u64] {
        &self.data
    }

    /// `row[dst] |= row[src]`
    pub fn or_row_into(&mut self, src: usize, dst: usize) {
        if src == dst {
            return;
        }
        let w = self.words_per_row;
        let (s, d) = (src * w, dst * w);
        if s < d {
            let (lo, hi) = self.data.split_at_mut(d);
            for (x, y) in hi[..w].iter_mut().zip(&lo[s..s + w]) {
                *x |= *y;
            }
        } else {
            let (lo, hi) = self.data.split_at_mut(s);
            for (x, y) in lo[d..d + w].iter_mut().zip(&hi[..w]) {
                *x |= *y;
            }
        }
    }

    pub fn row_count_ones(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Column indices of the set bits in row `r`, ascending.
    pub fn iter_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(i, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i * 64 + tz)
            })
        })
    }
}
