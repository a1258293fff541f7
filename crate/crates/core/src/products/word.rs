/// Lexicographically least rotation of `word`.
pub fn canonical_rotation(word: &[usize]) -> Vec<usize> {
    let n = word.len();
    let mut best = 0;
    for start in 1..n {
        let rotated = word[start..].iter().chain(&word[..start]);
        let current = word[best..].iter().chain(&word[..best]);
        if rotated.lt(current) {
            best = start;
        }
    }
    word[best..].iter().chain(&word[..best]).copied().collect()
}

/// Run-length form with 1-based letters, e.g. `[0,0,1]` → `"B1^2 B2"`.
pub fn render_word(word: &[usize], symbol: &str) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        let run = j - i;
        if run == 1 {
            parts.push(format!("{symbol}{}", word[i] + 1));
        } else {
            parts.push(format!("{symbol}{}^{run}", word[i] + 1));
        }
        i = j;
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_rotation() {
        assert_eq!(canonical_rotation(&[1, 0, 0, 0, 1, 0, 0]), vec![0, 0, 0, 1, 0, 0, 1]);
        assert_eq!(canonical_rotation(&[2]), vec![2]);
        assert_eq!(canonical_rotation(&[1, 0, 1, 0]), vec![0, 1, 0, 1]);
    }

    #[test]
    fn rendering() {
        assert_eq!(render_word(&[0; 8].iter().chain(&[1; 5]).copied().collect::<Vec<_>>(), "B"), "B1^8 B2^5");
        assert_eq!(render_word(&[0, 1, 0, 0, 1, 0, 0, 1], "B"), "B1 B2 B1^2 B2 B1^2 B2");
        assert_eq!(render_word(&[], "B"), "");
    }
}
