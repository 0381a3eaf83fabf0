//! Group family descriptors and the text DSL that names them.
//!
//! ```text
//! spec    := factor ( "x" factor )*
//! factor  := "S:" n | "A:" n | "Z:" n | "D:" n | "Q:" n | "QD:" n
//!          | "Ab:" n ("," n)*
//!          | "M:" p "," n
//!          | "Ham:" n [ ";" [ n ("," n)* ] ]
//!          | "SDP:" p "," q "," m "," r
//!          | "Perm:" degree ";" gen ("," gen)*
//! gen     := cycle+            cycle := "(" [ point ((","|" ") point)* ] ")"
//! ```
//!
//! Whitespace between tokens is ignored. Inside a cycle, points are separated
//! by commas or blanks; a lone multi-digit run such as `(125)` is read digit
//! by digit when the degree is below 10.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A parsed group family descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Symmetric(usize),
    Alternating(usize),
    Cyclic(usize),
    /// Direct product of cyclic groups of the listed orders.
    Abelian(Vec<usize>),
    /// Dihedral group, parameterized by its total order `2n`.
    Dihedral(usize),
    /// Generalized quaternion group of the given order.
    Quaternion(usize),
    /// Modular p-group `M(p^n)`.
    ModularM { p: usize, n: usize },
    /// Quasi-dihedral group of the given order.
    QuasiDihedral(usize),
    /// `Q8 × Z2^n × A` with `A` the abelian group of the odd invariants.
    Hamiltonian { n: usize, odd: Vec<usize> },
    /// `Z_p ⋊ Z_{q^m}` where the generator of the cyclic group acts by `x ↦ x^r`.
    SemidirectPQ { p: usize, q: usize, m: usize, r: usize },
    /// Group generated by permutations given as 1-based cycle lists.
    Permutations {
        degree: usize,
        generators: Vec<Vec<Vec<usize>>>,
    },
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

pub(crate) fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn is_power_of_two(n: usize) -> bool {
    n.is_power_of_two()
}

/// Multiplicative order of `r` modulo `p`, if `r` is a unit.
pub(crate) fn multiplicative_order(r: usize, p: usize) -> Option<usize> {
    if p < 2 || r % p == 0 {
        return None;
    }
    let mut x = r % p;
    for k in 1..=p {
        if x == 1 {
            return Some(k);
        }
        x = x * r % p;
    }
    None
}

impl GroupSpec {
    /// Checks the per-family parameter constraints, naming the one violated.
    pub fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Constraint(msg));
        match self {
            GroupSpec::Symmetric(n) | GroupSpec::Alternating(n) if *n == 0 => {
                fail("S:n and A:n require n >= 1".into())
            }
            GroupSpec::Cyclic(0) => fail("Z:n requires n >= 1".into()),
            GroupSpec::Abelian(list) if list.is_empty() || list.contains(&0) => {
                fail("Ab requires a non-empty list of positive orders".into())
            }
            GroupSpec::Dihedral(order) if *order < 2 || order % 2 != 0 => {
                fail(format!("D:{order} must be an even total order >= 2"))
            }
            GroupSpec::Quaternion(order) if *order < 8 || !is_power_of_two(*order) => {
                fail(format!("Q:{order} must be a power of 2 and at least 8"))
            }
            GroupSpec::ModularM { p, .. } if !is_prime(*p) => fail(format!("M:{p},n requires p prime")),
            GroupSpec::ModularM { p, n } if *n < 3 => {
                fail(format!("M({p}^n) requires n >= 3, got n = {n}"))
            }
            GroupSpec::ModularM { p: 2, n } if *n < 4 => {
                fail(format!("M(2^n) requires n >= 4, got n = {n}"))
            }
            GroupSpec::QuasiDihedral(order) if *order < 16 || !is_power_of_two(*order) => {
                fail(format!("QD:{order} must be a power of 2 and at least 16"))
            }
            GroupSpec::Hamiltonian { odd, .. } if odd.iter().any(|&a| a % 2 == 0) => {
                fail("Ham invariants of A must be odd".into())
            }
            GroupSpec::SemidirectPQ { p, q, m, r } => {
                if !is_prime(*p) || !is_prime(*q) {
                    return fail(format!("SDP:{p},{q},.. requires p and q prime"));
                }
                if *m == 0 {
                    return fail("SDP requires m >= 1".into());
                }
                if multiplicative_order(*r, *p) != Some(*q) {
                    return fail(format!(
                        "SDP requires r = {r} to have multiplicative order exactly {q} modulo {p}"
                    ));
                }
                Ok(())
            }
            GroupSpec::Permutations { degree, .. } if *degree == 0 || *degree > u16::MAX as usize => {
                fail(format!("Perm degree {degree} out of range"))
            }
            GroupSpec::Product(a, b) => {
                a.check()?;
                b.check()
            }
            _ => Ok(()),
        }
    }

    /// Order of the described group, when it is known without building it.
    pub fn expected_order(&self) -> Option<u128> {
        fn prod(it: impl Iterator<Item = usize>) -> Option<u128> {
            it.fold(Some(1u128), |acc, x| acc?.checked_mul(x as u128))
        }
        match self {
            GroupSpec::Symmetric(n) => prod(1..=*n),
            GroupSpec::Alternating(n) => prod(1..=*n).map(|f| if *n >= 2 { f / 2 } else { f }),
            GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) => Some(*n as u128),
            GroupSpec::Quaternion(n) | GroupSpec::QuasiDihedral(n) => Some(*n as u128),
            GroupSpec::Abelian(list) => prod(list.iter().copied()),
            GroupSpec::ModularM { p, n } => (*p as u128).checked_pow(*n as u32),
            GroupSpec::Hamiltonian { n, odd } => {
                let two = 2u128.checked_pow(*n as u32)?;
                prod(odd.iter().copied())?.checked_mul(8 * two)
            }
            GroupSpec::SemidirectPQ { p, q, m, .. } => {
                (*q as u128).checked_pow(*m as u32)?.checked_mul(*p as u128)
            }
            GroupSpec::Permutations { .. } => None,
            GroupSpec::Product(a, b) => a.expected_order()?.checked_mul(b.expected_order()?),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            GroupSpec::Symmetric(n) => write!(f, "S:{n}"),
            GroupSpec::Alternating(n) => write!(f, "A:{n}"),
            GroupSpec::Cyclic(n) => write!(f, "Z:{n}"),
            GroupSpec::Abelian(list) => write!(f, "Ab:{}", join(list)),
            GroupSpec::Dihedral(n) => write!(f, "D:{n}"),
            GroupSpec::Quaternion(n) => write!(f, "Q:{n}"),
            GroupSpec::ModularM { p, n } => write!(f, "M:{p},{n}"),
            GroupSpec::QuasiDihedral(n) => write!(f, "QD:{n}"),
            GroupSpec::Hamiltonian { n, odd } if odd.is_empty() => write!(f, "Ham:{n}"),
            GroupSpec::Hamiltonian { n, odd } => write!(f, "Ham:{n};{}", join(odd)),
            GroupSpec::SemidirectPQ { p, q, m, r } => write!(f, "SDP:{p},{q},{m},{r}"),
            GroupSpec::Permutations { degree, generators } => {
                write!(f, "Perm:{degree};")?;
                for (i, gen) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if gen.is_empty() {
                        write!(f, "()")?;
                    }
                    for cycle in gen {
                        let pts: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                Ok(())
            }
            GroupSpec::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

/// Parses the group spec DSL and checks the family constraints.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.chars().count() + 1,
    };
    let spec = parser.product()?;
    if let Some(tok) = parser.peek() {
        return Err(parser.error_at(tok.col, "'x' or end of input", &tok.kind.describe()));
    }
    spec.check()?;
    Ok(spec)
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Ident(String),
    Num(String),
    Colon,
    Comma,
    Semi,
    Open,
    Close,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Ident(s) => format!("'{s}'"),
            Kind::Num(s) => format!("number {s}"),
            Kind::Colon => "':'".into(),
            Kind::Comma => "','".into(),
            Kind::Semi => "';'".into(),
            Kind::Open => "'('".into(),
            Kind::Close => "')'".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    col: usize,
    /// Whether whitespace preceded the token.
    spaced: bool,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut spaced = false;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            spaced = true;
            i += 1;
            continue;
        }
        let kind = match c {
            ':' => Kind::Colon,
            ',' => Kind::Comma,
            ';' => Kind::Semi,
            '(' => Kind::Open,
            ')' => Kind::Close,
            c if c.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                Kind::Num(chars[start..=i].iter().collect())
            }
            // The product sign is its own token, so "Q:8xZ:3" also parses.
            'x' => Kind::Ident("x".into()),
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_alphabetic() && chars[i + 1] != 'x' {
                    i += 1;
                }
                Kind::Ident(chars[start..=i].iter().collect())
            }
            other => {
                return Err(Error::Parse {
                    pos: col,
                    expected: "a family name, number or punctuation".into(),
                    found: format!("'{other}'"),
                })
            }
        };
        out.push(Token { kind, col, spaced });
        spaced = false;
        i += 1;
    }
    Ok(out)
}

const FAMILIES: &str = "one of S, A, Z, Ab, D, Q, M, QD, Ham, SDP, Perm";

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error_at(&self, pos: usize, expected: &str, found: &str) -> Error {
        Error::Parse {
            pos,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn error_here(&self, expected: &str) -> Error {
        match self.peek() {
            Some(t) => self.error_at(t.col, expected, &t.kind.describe()),
            None => self.error_at(self.end, expected, "end of input"),
        }
    }

    fn eat(&mut self, kind: &Kind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: Kind) -> Result<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(self.error_here(&kind.describe()))
        }
    }

    fn number(&mut self) -> Result<usize> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(Kind::Num(s)) => {
                let col = self.peek().map_or(0, |t| t.col);
                self.pos += 1;
                s.parse()
                    .map_err(|_| self.error_at(col, "a number that fits in usize", &s))
            }
            _ => Err(self.error_here("a number")),
        }
    }

    fn number_list(&mut self) -> Result<Vec<usize>> {
        let mut out = vec![self.number()?];
        while self.eat(&Kind::Comma) {
            out.push(self.number()?);
        }
        Ok(out)
    }

    fn product(&mut self) -> Result<GroupSpec> {
        let mut spec = self.factor()?;
        while self.eat(&Kind::Ident("x".into())) {
            let rhs = self.factor()?;
            spec = GroupSpec::Product(Box::new(spec), Box::new(rhs));
        }
        Ok(spec)
    }

    fn factor(&mut self) -> Result<GroupSpec> {
        let name = match self.peek().map(|t| t.kind.clone()) {
            Some(Kind::Ident(name)) => name,
            _ => return Err(self.error_here(FAMILIES)),
        };
        let name_col = self.peek().map_or(0, |t| t.col);
        self.pos += 1;
        self.expect(Kind::Colon)?;
        let spec = match name.as_str() {
            "S" => GroupSpec::Symmetric(self.number()?),
            "A" => GroupSpec::Alternating(self.number()?),
            "Z" => GroupSpec::Cyclic(self.number()?),
            "D" => GroupSpec::Dihedral(self.number()?),
            "Q" => GroupSpec::Quaternion(self.number()?),
            "QD" => GroupSpec::QuasiDihedral(self.number()?),
            "Ab" => GroupSpec::Abelian(self.number_list()?),
            "M" => {
                let p = self.number()?;
                self.expect(Kind::Comma)?;
                GroupSpec::ModularM { p, n: self.number()? }
            }
            "SDP" => {
                let p = self.number()?;
                self.expect(Kind::Comma)?;
                let q = self.number()?;
                self.expect(Kind::Comma)?;
                let m = self.number()?;
                self.expect(Kind::Comma)?;
                GroupSpec::SemidirectPQ { p, q, m, r: self.number()? }
            }
            "Ham" => {
                let n = self.number()?;
                let mut odd = Vec::new();
                if self.eat(&Kind::Semi) && matches!(self.peek().map(|t| &t.kind), Some(Kind::Num(_))) {
                    odd = self.number_list()?;
                }
                GroupSpec::Hamiltonian { n, odd }
            }
            "Perm" => {
                let degree = self.number()?;
                self.expect(Kind::Semi)?;
                let mut generators = vec![self.generator(degree)?];
                while self.eat(&Kind::Comma) {
                    generators.push(self.generator(degree)?);
                }
                GroupSpec::Permutations { degree, generators }
            }
            _ => return Err(self.error_at(name_col, FAMILIES, &format!("'{name}'"))),
        };
        Ok(spec)
    }

    fn generator(&mut self, degree: usize) -> Result<Vec<Vec<usize>>> {
        if self.peek().map(|t| &t.kind) != Some(&Kind::Open) {
            return Err(self.error_here("'(' starting a cycle"));
        }
        let mut cycles = Vec::new();
        while self.eat(&Kind::Open) {
            let mut raw: Vec<(String, bool)> = Vec::new();
            loop {
                match self.peek().map(|t| (t.kind.clone(), t.spaced)) {
                    Some((Kind::Num(s), spaced)) => {
                        raw.push((s, spaced));
                        self.pos += 1;
                    }
                    Some((Kind::Comma, _)) if !raw.is_empty() => {
                        self.pos += 1;
                        if !matches!(self.peek().map(|t| &t.kind), Some(Kind::Num(_))) {
                            return Err(self.error_here("a point"));
                        }
                    }
                    Some((Kind::Close, _)) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error_here("a point or ')'")),
                }
            }
            let points: Vec<usize> = if raw.len() == 1 && raw[0].0.len() > 1 && degree < 10 {
                raw[0].0.chars().map(|c| c as usize - '0' as usize).collect()
            } else {
                raw.iter().map(|(s, _)| s.parse().unwrap_or(usize::MAX)).collect()
            };
            if !points.is_empty() {
                cycles.push(points);
            }
        }
        Ok(cycles)
    }
}
