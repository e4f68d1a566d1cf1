//! Published reference grids, used by `table --diff-paper`.

/// `⟨pt^{3d-1-e}⟩_{dH'-eE'}` on the blown-up plane; rows `e = 0..=6`, columns `d = 1..=7`.
pub const P2_POINTS: [[i64; 7]; 7] = [
    [1, 1, 12, 620, 87304, 26312976, 14616808192],
    [1, 1, 12, 620, 87304, 26312976, 14616808192],
    [0, 0, 1, 96, 18132, 6506400, 4059366000],
    [0, 0, 0, 1, 640, 401172, 347987200],
    [0, 0, 0, 0, 1, 3840, 7492040],
    [0, 0, 0, 0, 0, 1, 21504],
    [0, 0, 0, 0, 0, 0, 1],
];

/// `⟨pt^{2d-e}⟩_{dH'-eE'}` on blown-up `P³`; rows `e = 0..=4`, columns `d = 1..=8`.
pub const P3_POINTS: [[i64; 8]; 5] = [
    [1, 0, 1, 4, 105, 2576, 122129, 7397760],
    [1, 0, 1, 4, 105, 2576, 122129, 7397760],
    [0, 0, 0, 0, 12, 384, 23892, 1666128],
    [0, 0, 0, 0, 0, 0, 620, 72528],
    [0, 0, 0, 0, 0, 0, 0, 0],
];

/// `⟨E_2^{4d-2e}⟩_{dH'-eE'}` on blown-up `P³`; rows `e = -3..=3`, columns `d = 1..=4`.
pub const P3_EXCEPTIONAL: [[i64; 4]; 7] = [
    [2925, 4849635, 25767926176, 362956315020486],
    [-68, -35832, -89070592, -730861150688],
    [3, 342, 382720, 1793900214],
    [0, 0, -2332, -5810112],
    [1, -3, 40, 23825],
    [0, 0, 4, 960],
    [0, 0, 0, 45],
];

/// Published value at `(d, e)` for a table, or `None` outside the printed grid.
pub fn lookup(rows: &[&[i64]], e_min: i64, d: i64, e: i64) -> Option<i64> {
    let row = rows.get(usize::try_from(e - e_min).ok()?)?;
    row.get(usize::try_from(d - 1).ok()?).copied()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_counts() {
        let n: usize = P2_POINTS.len() * 7 + P3_POINTS.len() * 8 + P3_EXCEPTIONAL.len() * 4;
        assert_eq!(n, 49 + 40 + 28);
    }

    #[test]
    fn lookup_bounds() {
        let rows: Vec<&[i64]> = P3_EXCEPTIONAL.iter().map(|r| &r[..]).collect();
        assert_eq!(lookup(&rows, -3, 2, -2), Some(-35832));
        assert_eq!(lookup(&rows, -3, 5, 0), None);
        assert_eq!(lookup(&rows, -3, 1, -4), None);
        assert_eq!(lookup(&rows, -3, 0, 0), None);
    }
}
