use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::subshift::Word;
use crate::{Error, Result};

const DENSE_LIMIT: usize = 1 << 20;

/// Lookup table keyed by windows of a fixed length.
///
/// Small window spaces are indexed densely (windows encoded in base |A|), so
/// lookups on the hot path of long products avoid comparisons.
#[derive(Clone, Debug)]
pub struct WindowTable<T> {
    window_len: usize,
    keys: Vec<Word>,
    values: Vec<T>,
    dense: Option<Dense>,
}

#[derive(Clone, Debug)]
struct Dense {
    digit: [u16; 256],
    base: usize,
    slots: Vec<u32>,
}

impl Dense {
    fn code(&self, window: &[u8]) -> Option<usize> {
        let mut code = 0usize;
        for &s in window {
            let d = self.digit[s as usize];
            if d == 0 {
                return None;
            }
            code = code * self.base + (d as usize - 1);
        }
        Some(code)
    }
}

impl<T> WindowTable<T> {
    /// Builds a table; later duplicates of a window overwrite earlier ones.
    pub fn new(window_len: usize, entries: Vec<(Word, T)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (w, v) in entries {
            if w.len() != window_len {
                return Err(Error::WindowLength { expected: window_len, found: w.len() });
            }
            map.insert(w, v);
        }
        let (keys, values): (Vec<Word>, Vec<T>) = map.into_iter().unzip();
        let mut symbols: Vec<u8> = keys.iter().flat_map(|k| k.iter().copied()).collect();
        symbols.sort_unstable();
        symbols.dedup();
        let base = symbols.len().max(1);
        let dense =
            base.checked_pow(window_len as u32).filter(|&size| size <= DENSE_LIMIT && !keys.is_empty()).map(|size| {
                let mut digit = [0u16; 256];
                for (i, &s) in symbols.iter().enumerate() {
                    digit[s as usize] = i as u16 + 1;
                }
                let mut dense = Dense { digit, base, slots: vec![u32::MAX; size] };
                for (i, k) in keys.iter().enumerate() {
                    let code = dense.code(k).expect("key symbols are indexed");
                    dense.slots[code] = i as u32;
                }
                dense
            });
        Ok(WindowTable { window_len, keys, values, dense })
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    #[inline]
    pub fn index_of(&self, window: &[u8]) -> Option<usize> {
        if window.len() != self.window_len {
            return None;
        }
        match &self.dense {
            Some(d) => d.code(window).map(|c| d.slots[c]).filter(|&i| i != u32::MAX).map(|i| i as usize),
            None => self.keys.binary_search_by(|k| k.as_bytes().cmp(window)).ok(),
        }
    }

    #[inline]
    pub fn get(&self, window: &[u8]) -> Option<&T> {
        self.index_of(window).map(|i| &self.values[i])
    }

    pub fn keys(&self) -> &[Word] {
        &self.keys
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &T)> {
        self.keys.iter().zip(self.values.iter())
    }

    /// Same keys, new values.
    pub fn map<U>(&self, mut f: impl FnMut(&Word, &T) -> U) -> WindowTable<U> {
        WindowTable {
            window_len: self.window_len,
            keys: self.keys.clone(),
            values: self.iter().map(|(k, v)| f(k, v)).collect(),
            dense: self.dense.clone(),
        }
    }

    pub fn try_map<U>(&self, mut f: impl FnMut(&Word, &T) -> Result<U>) -> Result<WindowTable<U>> {
        let values = self.iter().map(|(k, v)| f(k, v)).collect::<Result<Vec<U>>>()?;
        Ok(WindowTable { window_len: self.window_len, keys: self.keys.clone(), values, dense: self.dense.clone() })
    }
}

impl<T: Clone> WindowTable<T> {
    pub fn to_map(&self) -> BTreeMap<Word, T> {
        self.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

impl<T: PartialEq> PartialEq for WindowTable<T> {
    fn eq(&self, other: &Self) -> bool {
        self.window_len == other.window_len && self.keys == other.keys && self.values == other.values
    }
}
