//! The bundled fixture corpus: example programs, printed matrices and
//! invariant files, embedded at compile time from `corpus/`.

macro_rules! fixture {
    ($file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/", $file))
    };
}

pub const PROG2: &str = fixture!("prog2.tl");
pub const PROG3: &str = fixture!("prog3.tl");
pub const PROG4: &str = fixture!("prog4.tl");
pub const PROG5: &str = fixture!("prog5.tl");
pub const PROG6: &str = fixture!("prog6.tl");
pub const NOT_TRANSITIVE: &str = fixture!("not_transitive.tl");

pub const PROGRAMS: [(&str, &str); 6] = [
    ("prog2", PROG2),
    ("prog3", PROG3),
    ("prog4", PROG4),
    ("prog5", PROG5),
    ("prog6", PROG6),
    ("not_transitive", NOT_TRANSITIVE),
];

pub const PROG4_C1: &str = fixture!("prog4_c1.mat");
pub const PROG4_C2: &str = fixture!("prog4_c2.mat");
pub const PROG4_C3: &str = fixture!("prog4_c3.mat");
/// Printed closed forms at exponents 1; direct computation disagrees with each.
pub const PROG4_C1C2_DISPLAY: &str = fixture!("prog4_c1c2_display.mat");
pub const PROG4_C1C3_DISPLAY: &str = fixture!("prog4_c1c3_display.mat");
pub const PROG4_C1C2C3_DISPLAY: &str = fixture!("prog4_c1c2c3_display.mat");

/// 2x2 matrices as printed, in the transposed orientation for case 2.
pub const PROG5_C1_PRINTED: &str = fixture!("prog5_c1_printed.mat");
pub const PROG5_C2_PRINTED: &str = fixture!("prog5_c2_printed.mat");
/// 3x3 matrices over `x, y, x+y` as printed; D1 is unsound at entry (1,3).
pub const PROG5_D1_PRINTED: &str = fixture!("prog5_d1_printed.mat");
pub const PROG5_D2_PRINTED: &str = fixture!("prog5_d2_printed.mat");

pub const PROG5_INV: &str = fixture!("prog5.inv");
pub const PROG6_INV: &str = fixture!("prog6.inv");
pub const NOT_TRANSITIVE_STRICT_INV: &str = fixture!("not_transitive_strict.inv");
pub const NOT_TRANSITIVE_RELAXED_INV: &str = fixture!("not_transitive_relaxed.inv");

pub const PENTAGON_COL: &str = fixture!("pentagon.col");
