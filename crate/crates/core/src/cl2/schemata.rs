//! Ten families of general-base formulas used as glue when compiling INT proofs.
//!
//! Underlined sequences are flat conjunctions `R1 /\ ... /\ Rk` merged into the
//! surrounding conjunction; an empty sequence disappears, and `-> F` with nothing
//! before it is just `F`.

use crate::formula::Formula;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Schema {
    /// `(R ∧ P ∧ Q ∧ S → T) → (R ∧ Q ∧ P ∧ S → T)`
    A { r: usize, s: usize },
    /// `(R → T) → (R ∧ P → T)`
    B { r: usize },
    /// `(R1→S1) ∧ ... ∧ (Rk→Sk) → (W ∧ R ∧ U → W ∧ S ∧ U)`
    C { k: usize, w: usize, u: usize },
    /// `(R ∧ P → Q) → (R → (P → Q))`
    D { r: usize },
    /// `(P → (Q → T)) ∧ (R → Q) → (P → (R → T))`
    E { r: usize },
    /// `(P → (R → Q)) ∧ (S ∧ Q → T) → (S ∧ R ∧ P → T)`
    F { r: usize, s: usize },
    /// `(P → Q) ∧ (Q → T) → (P → T)`
    G,
    /// `(R → S1) ∧ ... ∧ (R → Sn) → (R → S1 ⊓ ... ⊓ Sn)`
    H { r: usize, n: usize },
    /// `(R ∧ S1 → T) ∧ ... ∧ (R ∧ Sn → T) → (R ∧ (S1 ⊔ ... ⊔ Sn) → T)`
    I { r: usize, n: usize },
    /// `(R → Si) → (R → S1 ⊔ ... ⊔ Sn)`
    J { r: usize, n: usize, i: usize },
}

fn atoms(name: &str, k: usize) -> Vec<Formula> {
    (1..=k).map(|j| Formula::atom(&format!("{name}{j}"))).collect()
}

fn a(name: &str) -> Formula {
    Formula::atom(name)
}

fn cat(parts: &[&[Formula]]) -> Vec<Formula> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn imp(items: Vec<Formula>, k: Formula) -> Formula {
    Formula::imp_of(items, k)
}

impl Schema {
    /// The letter naming the family.
    pub fn letter(&self) -> char {
        match self {
            Schema::A { .. } => 'a',
            Schema::B { .. } => 'b',
            Schema::C { .. } => 'c',
            Schema::D { .. } => 'd',
            Schema::E { .. } => 'e',
            Schema::F { .. } => 'f',
            Schema::G => 'g',
            Schema::H { .. } => 'h',
            Schema::I { .. } => 'i',
            Schema::J { .. } => 'j',
        }
    }

    /// The general-base formula, or `None` when the parameters leave nothing to state.
    pub fn formula(&self) -> Option<Formula> {
        let (p, q, t) = (a("P"), a("Q"), a("T"));
        Some(match *self {
            Schema::A { r, s } => {
                let (rr, ss) = (atoms("R", r), atoms("S", s));
                Formula::implies(
                    imp(cat(&[&rr, &[p.clone(), q.clone()], &ss]), t.clone()),
                    imp(cat(&[&rr, &[q, p], &ss]), t),
                )
            }
            Schema::B { r } => {
                let rr = atoms("R", r);
                Formula::implies(imp(rr.clone(), t.clone()), imp(cat(&[&rr, &[p]]), t))
            }
            Schema::C { k, w, u } => {
                let (rr, ss, ww, uu) = (atoms("R", k), atoms("S", k), atoms("W", w), atoms("U", u));
                let pairs: Vec<Formula> =
                    rr.iter().zip(&ss).map(|(x, y)| Formula::implies(x.clone(), y.clone())).collect();
                let concl = Formula::conj_of(cat(&[&ww, &ss, &uu]))?;
                imp(pairs, imp(cat(&[&ww, &rr, &uu]), concl))
            }
            Schema::D { r } => {
                let rr = atoms("R", r);
                Formula::implies(
                    imp(cat(&[&rr, &[p.clone()]]), q.clone()),
                    imp(rr, Formula::implies(p, q)),
                )
            }
            Schema::E { r } => {
                let rr = atoms("R", r);
                Formula::implies(
                    Formula::ParConj(vec![
                        Formula::implies(p.clone(), Formula::implies(q.clone(), t.clone())),
                        imp(rr.clone(), q),
                    ]),
                    Formula::implies(p, imp(rr, t)),
                )
            }
            Schema::F { r, s } => {
                let (rr, ss) = (atoms("R", r), atoms("S", s));
                Formula::implies(
                    Formula::ParConj(vec![
                        Formula::implies(p.clone(), imp(rr.clone(), q.clone())),
                        imp(cat(&[&ss, &[q]]), t.clone()),
                    ]),
                    imp(cat(&[&ss, &rr, &[p]]), t),
                )
            }
            Schema::G => Formula::implies(
                Formula::ParConj(vec![Formula::implies(p.clone(), q.clone()), Formula::implies(q, t.clone())]),
                Formula::implies(p, t),
            ),
            Schema::H { r, n } => {
                let (rr, ss) = (atoms("R", r), atoms("S", n));
                let prem: Vec<Formula> = ss.iter().map(|si| imp(rr.clone(), si.clone())).collect();
                imp(prem, imp(rr, Formula::ChoiceConj(ss)))
            }
            Schema::I { r, n } => {
                let (rr, ss) = (atoms("R", r), atoms("S", n));
                let prem: Vec<Formula> = ss.iter().map(|si| imp(cat(&[&rr, &[si.clone()]]), t.clone())).collect();
                imp(prem, imp(cat(&[&rr, &[Formula::ChoiceDisj(ss)]]), t))
            }
            Schema::J { r, n, i } => {
                if i < 1 || i > n {
                    return None;
                }
                let (rr, ss) = (atoms("R", r), atoms("S", n));
                Formula::implies(imp(rr.clone(), ss[i - 1].clone()), imp(rr, Formula::ChoiceDisj(ss)))
            }
        })
    }

    /// Every member with underlined lengths up to `max_len` and `n` in `ns`.
    pub fn family(letter: char, max_len: usize, ns: &[usize]) -> Vec<Schema> {
        let lens = 0..=max_len;
        let mut out = Vec::new();
        match letter {
            'a' => lens.clone().for_each(|r| lens.clone().for_each(|s| out.push(Schema::A { r, s }))),
            'b' => lens.for_each(|r| out.push(Schema::B { r })),
            'c' => {
                for k in lens.clone() {
                    for w in lens.clone() {
                        for u in lens.clone() {
                            out.push(Schema::C { k, w, u });
                        }
                    }
                }
            }
            'd' => lens.for_each(|r| out.push(Schema::D { r })),
            'e' => lens.for_each(|r| out.push(Schema::E { r })),
            'f' => lens.clone().for_each(|r| lens.clone().for_each(|s| out.push(Schema::F { r, s }))),
            'g' => out.push(Schema::G),
            'h' => lens.for_each(|r| ns.iter().for_each(|&n| out.push(Schema::H { r, n }))),
            'i' => lens.for_each(|r| ns.iter().for_each(|&n| out.push(Schema::I { r, n }))),
            'j' => lens.for_each(|r| ns.iter().for_each(|&n| (1..=n).for_each(|i| out.push(Schema::J { r, n, i })))),
            _ => {}
        }
        out.retain(|s| s.formula().is_some());
        out
    }

    /// All ten families.
    pub fn all(max_len: usize, ns: &[usize]) -> Vec<Schema> {
        "abcdefghij".chars().flat_map(|c| Schema::family(c, max_len, ns)).collect()
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Schema::A { r, s } | Schema::F { r, s } => write!(f, "{}[r={r},s={s}]", self.letter()),
            Schema::B { r } | Schema::D { r } | Schema::E { r } => write!(f, "{}[r={r}]", self.letter()),
            Schema::C { k, w, u } => write!(f, "c[k={k},w={w},u={u}]"),
            Schema::G => write!(f, "g"),
            Schema::H { r, n } | Schema::I { r, n } => write!(f, "{}[r={r},n={n}]", self.letter()),
            Schema::J { r, n, i } => write!(f, "j[r={r},n={n},i={i}]"),
        }
    }
}
