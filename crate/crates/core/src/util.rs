/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `(-1)^(n-k) C(n, k)` as a float.
pub fn signed_binomial(n: u32, k: u32) -> f64 {
    let c = binomial(n, k) as f64;
    if (n - k) % 2 == 0 {
        c
    } else {
        -c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_rows() {
        assert_eq!((0..=4).map(|k| binomial(4, k)).collect::<Vec<_>>(), vec![1, 4, 6, 4, 1]);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(signed_binomial(2, 1), -2.0);
        assert_eq!(signed_binomial(3, 0), -1.0);
    }
}
