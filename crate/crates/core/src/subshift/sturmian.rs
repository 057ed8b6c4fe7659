use alloc::vec::Vec;

/// Convergent p_k / q_k of α = [0; a₁, a₂, …].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: u128,
    pub q: u128,
}

// Denominators beyond this cannot index any prefix we would generate.
const Q_CAP: u128 = 1 << 62;

/// Convergents p_k/q_k for k = 1..=len, truncated once q_k would exceed 2⁶².
pub fn convergents(partial_quotients: &[u32]) -> Vec<Convergent> {
    let (mut p_prev, mut q_prev) = (1u128, 0u128);
    let (mut p, mut q) = (0u128, 1u128);
    let mut out = Vec::with_capacity(partial_quotients.len());
    for &a in partial_quotients {
        let a = a as u128;
        let (p_next, q_next) = (a * p + p_prev, a * q + q_prev);
        if q_next > Q_CAP {
            break;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        out.push(Convergent { p, q });
    }
    out
}

/// Characteristic word of p/q: symbol k (k = 1, 2, …) is ⌊(k+1)p/q⌋ − ⌊kp/q⌋,
/// written 'a' for 1 and 'b' for 0. Integer arithmetic keeps it exact.
pub(crate) fn characteristic_prefix(c: Convergent, length: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(length);
    let mut prev = c.p / c.q; // k = 1
    for k in 1..=length as u128 {
        let next = (k + 1) * c.p / c.q;
        out.push(if next - prev == 1 { b'a' } else { b'b' });
        prev = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_convergents_are_fibonacci_ratios() {
        let c = convergents(&[1; 8]);
        let q: Vec<u128> = c.iter().map(|c| c.q).collect();
        let p: Vec<u128> = c.iter().map(|c| c.p).collect();
        assert_eq!(q, [1, 2, 3, 5, 8, 13, 21, 34]);
        assert_eq!(p, [1, 1, 2, 3, 5, 8, 13, 21]);
    }

    #[test]
    fn characteristic_word_of_two_fifths() {
        // α = 2/5 = [0; 2, 2]: floor((k+1)·2/5) − floor(k·2/5) for k = 1..5
        let w = characteristic_prefix(Convergent { p: 2, q: 5 }, 5);
        assert_eq!(&w, b"babab");
    }

    #[test]
    fn huge_quotients_are_truncated() {
        let c = convergents(&[u32::MAX; 10]);
        assert!(c.len() < 10);
        assert!(c.last().unwrap().q <= Q_CAP);
    }
}
