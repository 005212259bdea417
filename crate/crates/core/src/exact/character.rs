//! Real Dirichlet characters: principal characters and Kronecker symbols.

use serde::Serialize;

use super::arith::factor_u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CharacterKind {
    /// Principal character modulo `modulus` (modulus 1 is the constant 1).
    Trivial,
    /// Kronecker symbol (D/.) of a fundamental discriminant.
    Kronecker(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub kind: CharacterKind,
}

/// Kronecker symbol (a/n) for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n) for odd positive n
    let mut a = a.rem_euclid(n);
    let mut n = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: i64| factor_u64(m.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        assert!(modulus >= 1);
        DirichletCharacter { modulus, kind: CharacterKind::Trivial }
    }

    /// Character attached to a fundamental discriminant, of modulus |D|.
    pub fn kronecker(d: i64) -> Self {
        assert!(is_fundamental_discriminant(d), "{d} is not a fundamental discriminant");
        DirichletCharacter { modulus: d.unsigned_abs(), kind: CharacterKind::Kronecker(d) }
    }

    pub fn eval(&self, n: i64) -> i32 {
        match self.kind {
            CharacterKind::Trivial => {
                if gcd(n.unsigned_abs(), self.modulus) == 1 {
                    1
                } else {
                    0
                }
            }
            CharacterKind::Kronecker(d) => kronecker(d, n),
        }
    }

    pub fn conductor(&self) -> u64 {
        match self.kind {
            CharacterKind::Trivial => 1,
            CharacterKind::Kronecker(d) => d.unsigned_abs(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == CharacterKind::Trivial
    }

    /// +1 for even characters, -1 for odd ones.
    pub fn parity(&self) -> i32 {
        match self.kind {
            CharacterKind::Trivial => 1,
            CharacterKind::Kronecker(d) => {
                if d < 0 {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        match self.kind {
            CharacterKind::Trivial => Self::trivial(1),
            CharacterKind::Kronecker(_) => *self,
        }
    }

    /// j-th power; even powers of a quadratic character are principal mod the same modulus.
    pub fn pow(&self, j: u32) -> Self {
        match self.kind {
            CharacterKind::Trivial => *self,
            CharacterKind::Kronecker(_) if j % 2 == 0 => Self::trivial(self.modulus),
            CharacterKind::Kronecker(_) => *self,
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
