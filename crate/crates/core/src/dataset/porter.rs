//! Porter suffix-stripping stemmer (Porter 1980).
//!
//! The classic five-step algorithm over lowercase ASCII words. It conflates
//! inflectional and derivational variants onto a shared stem, e.g. `computer`,
//! `computers`, `computing`, `computation` and `computational` all map to
//! `comput`. Tokens shorter than three letters, or containing anything
//! outside `a..z`, are returned unchanged.

/// Stem one lowercase token.
pub fn stem(token: &str) -> String {
    let b = token.as_bytes();
    if b.len() <= 2 || !b.iter().all(|c| c.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut s = Stemmer {
        b: b.to_vec(),
        k: b.len(),
        j: 0,
    };
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    String::from_utf8(s.b[..s.k].to_vec()).expect("ascii stays ascii")
}

struct Stemmer {
    b: Vec<u8>,
    /// length of the live prefix of `b`
    k: usize,
    /// end of the stem when a candidate suffix has matched
    j: usize,
}

impl Stemmer {
    /// true if b[i] is a consonant
    fn cons(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.cons(i - 1),
            _ => true,
        }
    }

    /// the measure m of b[..j]: [C](VC)^m[V]
    fn measure(&self) -> usize {
        let mut n = 0;
        let mut i = 0;
        loop {
            if i >= self.j {
                return n;
            }
            if !self.cons(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i >= self.j {
                    return n;
                }
                if self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i >= self.j {
                    return n;
                }
                if !self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    /// b[..j] contains a vowel
    fn vowel_in_stem(&self) -> bool {
        (0..self.j).any(|i| !self.cons(i))
    }

    /// b[..i+1] ends with a double consonant
    fn double_cons(&self, i: usize) -> bool {
        i >= 1 && self.b[i] == self.b[i - 1] && self.cons(i)
    }

    /// b[..i+1] ends consonant-vowel-consonant with the final consonant
    /// not w, x or y; signals a short stem like "hop" wanting its e back
    fn cvc(&self, i: usize) -> bool {
        if i < 2 || !self.cons(i) || self.cons(i - 1) || !self.cons(i - 2) {
            return false;
        }
        !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    /// if b[..k] ends with `s`, set j to the stem end and return true
    fn ends(&mut self, s: &[u8]) -> bool {
        if s.len() > self.k || &self.b[self.k - s.len()..self.k] != s {
            return false;
        }
        self.j = self.k - s.len();
        true
    }

    /// replace the matched suffix with `s`
    fn set_to(&mut self, s: &[u8]) {
        self.b.truncate(self.j);
        self.b.extend_from_slice(s);
        self.k = self.j + s.len();
    }

    fn replace_if_measure(&mut self, s: &[u8]) {
        if self.measure() > 0 {
            self.set_to(s);
        }
    }

    /// plurals and -ed / -ing
    fn step1ab(&mut self) {
        if self.b[self.k - 1] == b's' {
            if self.ends(b"sses") || self.ends(b"ies") {
                self.k -= 2;
            } else if !self.ends(b"ss") && self.ends(b"s") {
                self.k -= 1;
            }
        }
        if self.ends(b"eed") {
            if self.measure() > 0 {
                self.k -= 1;
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.vowel_in_stem() {
            self.k = self.j;
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.double_cons(self.k - 1) {
                if !matches!(self.b[self.k - 1], b'l' | b's' | b'z') {
                    self.k -= 1;
                }
            } else {
                self.j = self.k;
                if self.measure() == 1 && self.cvc(self.k - 1) {
                    self.b.truncate(self.k);
                    self.b.push(b'e');
                    self.k += 1;
                }
            }
        }
    }

    /// terminal y -> i when another vowel exists in the stem
    fn step1c(&mut self) {
        if self.ends(b"y") && self.vowel_in_stem() {
            self.b[self.k - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        // dispatch on the penultimate letter, longest suffix first
        let rules: &[(&[u8], &[u8])] = match self.b[self.k - 2] {
            b'a' => &[(b"ational", b"ate"), (b"tional", b"tion")],
            b'c' => &[(b"enci", b"ence"), (b"anci", b"ance")],
            b'e' => &[(b"izer", b"ize")],
            b'l' => &[
                (b"abli", b"able"),
                (b"entli", b"ent"),
                (b"ousli", b"ous"),
                (b"alli", b"al"),
                (b"eli", b"e"),
            ],
            b'o' => &[(b"ization", b"ize"), (b"ation", b"ate"), (b"ator", b"ate")],
            b's' => &[
                (b"iveness", b"ive"),
                (b"fulness", b"ful"),
                (b"ousness", b"ous"),
                (b"alism", b"al"),
            ],
            b't' => &[(b"aliti", b"al"), (b"biliti", b"ble"), (b"iviti", b"ive")],
            _ => return,
        };
        for (suffix, replacement) in rules {
            if self.ends(suffix) {
                self.replace_if_measure(replacement);
                return;
            }
        }
    }

    fn step3(&mut self) {
        let rules: &[(&[u8], &[u8])] = match self.b[self.k - 1] {
            b'e' => &[(b"icate", b"ic"), (b"alize", b"al"), (b"ative", b"")],
            b'i' => &[(b"iciti", b"ic")],
            b'l' => &[(b"ical", b"ic"), (b"ful", b"")],
            b's' => &[(b"ness", b"")],
            _ => return,
        };
        for (suffix, replacement) in rules {
            if self.ends(suffix) {
                self.replace_if_measure(replacement);
                return;
            }
        }
    }

    /// strip residual suffixes when the stem is long enough (m > 1)
    fn step4(&mut self) {
        let matched = match self.b[self.k - 2] {
            b'a' => self.ends(b"al"),
            b'c' => self.ends(b"ance") || self.ends(b"ence"),
            b'e' => self.ends(b"er"),
            b'i' => self.ends(b"ic"),
            b'l' => self.ends(b"able") || self.ends(b"ible"),
            b'n' => {
                self.ends(b"ement") || self.ends(b"ment") || self.ends(b"ent") || self.ends(b"ant")
            }
            b'o' => {
                (self.ends(b"ion") && self.j >= 1 && matches!(self.b[self.j - 1], b's' | b't'))
                    || self.ends(b"ou")
            }
            b's' => self.ends(b"ism"),
            b't' => self.ends(b"ate") || self.ends(b"iti"),
            b'u' => self.ends(b"ous"),
            b'v' => self.ends(b"ive"),
            b'z' => self.ends(b"ize"),
            _ => false,
        };
        if matched && self.measure() > 1 {
            self.k = self.j;
        }
    }

    /// drop a final -e and reduce -ll on long stems
    fn step5(&mut self) {
        self.j = self.k;
        if self.b[self.k - 1] == b'e' {
            let m = self.measure();
            if m > 1
                || (m == 1 && {
                    self.j = self.k - 1;
                    !self.cvc(self.k.wrapping_sub(2))
                })
            {
                self.k -= 1;
            }
            self.j = self.k;
        }
        if self.b[self.k - 1] == b'l' && self.double_cons(self.k - 1) && self.measure() > 1 {
            self.k -= 1;
        }
    }
}
