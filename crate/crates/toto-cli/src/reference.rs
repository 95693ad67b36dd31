//! Published extremal-time values for the four built-in benchmark cases,
//! used by `table` for display headers and by `table --tolerance` as the
//! regression baseline.

pub const U1: f64 = 0.0002;

/// (gamma, u2) per column; gamma = sqrt(3) at full precision for the first
/// two cases.
pub const CASES: [(f64, f64); 4] = [
    (1.7320508075688772, 1.0),
    (1.7320508075688772, 6.5),
    (8.0, 1.0),
    (8.0, 4.0),
];

pub const CASE_HEADERS: [(&str, &str); 4] = [
    ("gamma=sqrt(3)", "u2=1"),
    ("gamma=sqrt(3)", "u2=6.5"),
    ("gamma=8", "u2=1"),
    ("gamma=8", "u2=4"),
];

/// Row label and the published four-decimal time per case; `None` marks
/// cells where no extremal of that shape exists.
pub const ROWS: [(&str, [Option<f64>; 4]); 13] = [
    ("T1+", [Some(1.6784), Some(1.4513), Some(8.0159), Some(7.9707)]),
    ("T3+", [None, None, Some(7.3863), Some(4.6189)]),
    ("T5+", [None, None, Some(9.5568), None]),
    ("T3-", [None, None, Some(9.7758), Some(4.9845)]),
    ("T5-", [None, None, Some(9.5735), None]),
    ("T2+", [None, Some(1.8320), None, Some(8.0452)]),
    ("T4+", [None, Some(2.5858), None, Some(4.9982)]),
    ("T6+", [None, None, None, Some(5.7987)]),
    ("T8+", [None, None, None, Some(7.0651)]),
    ("T2-", [None, Some(1.3888), None, Some(4.8098)]),
    ("T4-", [None, Some(2.5387), None, Some(4.5458)]),
    ("T6-", [None, None, None, Some(5.6884)]),
    ("T8-", [None, None, None, Some(7.0496)]),
];
