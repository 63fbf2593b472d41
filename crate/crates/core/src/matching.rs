//! Maximum bipartite matching between rows and columns (Hopcroft–Karp).

use std::collections::VecDeque;

use crate::error::HallViolation;

const UNSEEN: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct Matching {
    pub row_to_col: Vec<Option<usize>>,
    pub col_to_row: Vec<Option<usize>>,
    pub size: usize,
}

impl Matching {
    pub fn is_perfect(&self) -> bool {
        self.size == self.row_to_col.len() && self.size == self.col_to_row.len()
    }
}

/// `adj[r]` lists the columns row `r` may be matched to.
pub fn maximum_matching(adj: &[Vec<usize>], cols: usize) -> Matching {
    let rows = adj.len();
    let mut row_to_col = vec![None; rows];
    let mut col_to_row: Vec<Option<usize>> = vec![None; cols];
    let mut size = 0;

    // greedy warm start
    for (r, list) in adj.iter().enumerate() {
        if let Some(&c) = list.iter().find(|&&c| col_to_row[c].is_none()) {
            row_to_col[r] = Some(c);
            col_to_row[c] = Some(r);
            size += 1;
        }
    }

    let mut dist = vec![UNSEEN; rows];
    loop {
        // layer free rows
        let mut queue = VecDeque::new();
        for r in 0..rows {
            if row_to_col[r].is_none() {
                dist[r] = 0;
                queue.push_back(r);
            } else {
                dist[r] = UNSEEN;
            }
        }
        let mut found = false;
        while let Some(r) = queue.pop_front() {
            for &c in &adj[r] {
                match col_to_row[c] {
                    None => found = true,
                    Some(r2) if dist[r2] == UNSEEN => {
                        dist[r2] = dist[r] + 1;
                        queue.push_back(r2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut cursor = vec![0usize; rows];
        for r in 0..rows {
            if row_to_col[r].is_none()
                && augment(r, adj, &mut dist, &mut cursor, &mut row_to_col, &mut col_to_row)
            {
                size += 1;
            }
        }
    }

    Matching {
        row_to_col,
        col_to_row,
        size,
    }
}

fn augment(
    r: usize,
    adj: &[Vec<usize>],
    dist: &mut [usize],
    cursor: &mut [usize],
    row_to_col: &mut [Option<usize>],
    col_to_row: &mut [Option<usize>],
) -> bool {
    while cursor[r] < adj[r].len() {
        let c = adj[r][cursor[r]];
        cursor[r] += 1;
        let ok = match col_to_row[c] {
            None => true,
            Some(r2) => {
                dist[r2] == dist[r] + 1 && augment(r2, adj, dist, cursor, row_to_col, col_to_row)
            }
        };
        if ok {
            row_to_col[r] = Some(c);
            col_to_row[c] = Some(r);
            return true;
        }
    }
    dist[r] = UNSEEN;
    false
}

/// Rows reachable from the lowest unmatched row by alternating paths, together
/// with their neighbourhood. The neighbourhood is one column short of the row
/// set, so the rows cannot all be matched.
pub fn hall_violation(adj: &[Vec<usize>], m: &Matching) -> Option<HallViolation> {
    let start = m.row_to_col.iter().position(Option::is_none)?;
    let mut seen_row = vec![false; adj.len()];
    let mut seen_col = vec![false; m.col_to_row.len()];
    let mut queue = VecDeque::from([start]);
    seen_row[start] = true;
    while let Some(r) = queue.pop_front() {
        for &c in &adj[r] {
            if seen_col[c] {
                continue;
            }
            seen_col[c] = true;
            if let Some(r2) = m.col_to_row[c] {
                if !seen_row[r2] {
                    seen_row[r2] = true;
                    queue.push_back(r2);
                }
            }
        }
    }
    Some(HallViolation {
        rows: (0..adj.len()).filter(|&r| seen_row[r]).collect(),
        columns: (0..seen_col.len()).filter(|&c| seen_col[c]).collect(),
    })
}
