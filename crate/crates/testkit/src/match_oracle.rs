//! Brute-force dictionary matcher: scans every character interval of the
//! normalized text, keeps the token-aligned ones that equal a surface form,
//! then picks left to right, longest first at equal start.

use std::collections::HashMap;

/// (start, end, concept_id) in character offsets.
pub type Match = (usize, usize, String);

pub fn all_aligned_matches(text: &str, surfaces: &HashMap<String, String>) -> Vec<Match> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    for start in 0..n {
        if start > 0 && chars[start - 1] != ' ' {
            continue;
        }
        for end in start + 1..=n {
            if end < n && chars[end] != ' ' {
                continue;
            }
            let s: String = chars[start..end].iter().collect();
            if let Some(concept) = surfaces.get(&s) {
                out.push((start, end, concept.clone()));
            }
        }
    }
    out
}

pub fn brute_force_select(text: &str, surfaces: &HashMap<String, String>) -> Vec<Match> {
    let candidates = all_aligned_matches(text, surfaces);
    let mut chosen = Vec::new();
    let mut pos = 0;
    loop {
        let next = candidates
            .iter()
            .filter(|m| m.0 >= pos)
            .min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match next {
            Some(m) => {
                pos = m.1;
                chosen.push(m.clone());
            }
            None => break,
        }
    }
    chosen
}
