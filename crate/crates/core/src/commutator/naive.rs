//! Normal forms for two letters in class at most three by plain word
//! rewriting. Independent of the collection engine and used to cross-check it.
//!
//! Letters: `1 = x1`, `2 = x2`, `3 = [x2,x1]`, `4 = [[x2,x1],x1]`,
//! `5 = [[x2,x1],x2]`; negative values are inverses. In class 3, 4 and 5 are
//! central; in class 2 they are trivial.

/// Exponents over `x1, x2, [x2,x1]` (class 2) or all five letters (class 3)
/// of a word in `±1, ±2`.
pub fn naive_normal_form(word: &[i64], class: u32) -> Vec<i64> {
    assert!(
        class == 2 || class == 3,
        "rewriting rules cover class 2 and 3"
    );
    let mut w: Vec<i64> = word.to_vec();
    loop {
        if let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] == -w[i + 1]) {
            w.drain(i..i + 2);
            continue;
        }
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i].abs() > w[i + 1].abs()) else {
            break;
        };
        let (a, b) = (w[i], w[i + 1]);
        let same_sign = (a > 0) == (b > 0);
        let rep: Vec<i64> = match (a.abs(), b.abs()) {
            (4 | 5, _) => vec![b, a],
            (2, 1) => match (a > 0, b > 0) {
                (true, true) => vec![1, 2, 3],
                (true, false) => vec![-1, 2, -3, 4],
                (false, true) => vec![1, -2, -3, 5],
                (false, false) => vec![-1, -2, 3, -4, -5],
            },
            (3, 1) => vec![b, a, if same_sign { 4 } else { -4 }],
            (3, 2) => vec![b, a, if same_sign { 5 } else { -5 }],
            _ => unreachable!("letters are 1..=5"),
        };
        let rep: Vec<i64> = rep
            .into_iter()
            .filter(|x| class >= 3 || x.abs() <= 3)
            .collect();
        w.splice(i..i + 2, rep);
    }
    let mut exps = vec![0i64; if class >= 3 { 5 } else { 3 }];
    for l in w {
        exps[l.unsigned_abs() as usize - 1] += l.signum();
    }
    exps
}

/// All words of length `<= max_len` in the letters `±1..=±d`.
pub fn all_words(d: i64, max_len: usize) -> Vec<Vec<i64>> {
    let letters: Vec<i64> = (1..=d).flat_map(|l| [l, -l]).collect();
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<i64>> = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
