//! Gluing matrices: edge rows `E_i` and optional cusp rows `M_k`, `L_k`.

use super::TriError;

/// The gluing matrix of a triangulation with `n` tetrahedra and `r` cusps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GluingData {
    pub n: usize,
    pub r: usize,
    pub edge_rows: Vec<Vec<i64>>,
    /// `2r` rows, meridian then longitude for each cusp.
    pub cusp_rows: Option<Vec<Vec<i64>>>,
}

impl GluingData {
    pub fn new(
        n: usize,
        r: usize,
        edge_rows: Vec<Vec<i64>>,
        cusp_rows: Option<Vec<Vec<i64>>>,
    ) -> Result<Self, TriError> {
        let all = edge_rows.iter().chain(cusp_rows.iter().flatten());
        if let Some(row) = all.into_iter().find(|row| row.len() != 3 * n) {
            return Err(TriError::Shape(format!("row of length {} where {} expected", row.len(), 3 * n)));
        }
        if let Some(c) = &cusp_rows {
            if c.len() != 2 * r {
                return Err(TriError::Shape(format!("{} cusp rows for {r} cusps", c.len())));
            }
        }
        Ok(GluingData { n, r, edge_rows, cusp_rows })
    }

    pub fn meridian(&self, k: usize) -> Option<&[i64]> {
        self.cusp_rows.as_ref().map(|c| c[2 * k].as_slice())
    }

    pub fn longitude(&self, k: usize) -> Option<&[i64]> {
        self.cusp_rows.as_ref().map(|c| c[2 * k + 1].as_slice())
    }

    /// The tetrahedral solution `T_j`.
    pub fn tet_solution(&self, j: usize) -> Vec<i64> {
        let mut v = vec![0; 3 * self.n];
        v[3 * j..3 * j + 3].fill(1);
        v
    }

    /// Renders in the fixture format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.r);
        for row in self.edge_rows.iter().chain(self.cusp_rows.iter().flatten()) {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses the fixture format: a header line `n r`, then `n` edge rows, then
/// either nothing or `2r` cusp rows. `#` starts a comment.
pub fn load_gluing_matrix(text: &str) -> Result<GluingData, TriError> {
    let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 0;
        for tok in body.split_whitespace() {
            // Column of this token within the original line, 1-based.
            col = body[col..].find(tok).map_or(col, |p| col + p);
            let v = tok.parse::<i64>().map_err(|e| TriError::Parse {
                line: ln + 1,
                col: col + 1,
                msg: format!("`{tok}`: {e}"),
            })?;
            row.push(v);
            col += tok.len();
        }
        rows.push((ln + 1, row));
    }
    let (hline, header) = rows
        .first()
        .cloned()
        .ok_or(TriError::Parse { line: 1, col: 1, msg: "empty gluing file".into() })?;
    if header.len() != 2 || header[0] < 0 || header[1] < 0 {
        return Err(TriError::Parse { line: hline, col: 1, msg: "header must be `n r`".into() });
    }
    let (n, r) = (header[0] as usize, header[1] as usize);
    let body: Vec<Vec<i64>> = rows.into_iter().skip(1).map(|(_, r)| r).collect();
    if body.len() != n && body.len() != n + 2 * r {
        return Err(TriError::Shape(format!(
            "{} rows; expected {n} edge rows optionally followed by {} cusp rows",
            body.len(),
            2 * r
        )));
    }
    let mut edge_rows = body;
    let cusp = if edge_rows.len() > n { Some(edge_rows.split_off(n)) } else { None };
    GluingData::new(n, r, edge_rows, cusp)
}

/// Applies `C` blockwise: `(a, b, c) ↦ (c - b, a - c, b - a)`.
pub fn apply_c(v: &[i64]) -> Vec<i64> {
    v.chunks(3).flat_map(|t| [t[2] - t[1], t[0] - t[2], t[1] - t[0]]).collect()
}

/// `B = A C`, computed row by row from the edge rows.
pub fn qmatching_matrix(g: &GluingData) -> Vec<Vec<i64>> {
    g.edge_rows.iter().map(|r| apply_c(r)).collect()
}
