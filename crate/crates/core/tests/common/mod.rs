//! Brute-force tableau oracles shared by the integration tests.

#![allow(dead_code)]

/// Every semistandard filling of `shape` with letters `0..d`, as row vectors.
pub fn semistandard_tableaux(shape: &[usize], d: usize) -> Vec<Vec<Vec<usize>>> {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
        .collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    let mut out = Vec::new();
    fill(&cells, 0, d, &mut grid, &mut out);
    out
}

fn fill(
    cells: &[(usize, usize)],
    k: usize,
    d: usize,
    grid: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if k == cells.len() {
        out.push(grid.clone());
        return;
    }
    let (i, j) = cells[k];
    let lo_left = if j > 0 { grid[i][j - 1] } else { 0 };
    let lo_up = if i > 0 { grid[i - 1][j] + 1 } else { 0 };
    for v in lo_left.max(lo_up)..d {
        grid[i][j] = v;
        fill(cells, k + 1, d, grid, out);
    }
}

/// `s_λ(x)` as the weight sum over semistandard tableaux; `x` need not be sorted.
pub fn schur_by_tableaux(shape: &[usize], x: &[f64]) -> f64 {
    semistandard_tableaux(shape, x.len())
        .iter()
        .map(|t| t.iter().flatten().map(|&v| x[v]).product::<f64>())
        .sum()
}

/// Standard tableaux counted by peeling off corners.
pub fn standard_tableaux(shape: &[usize]) -> u128 {
    let shape: Vec<usize> = shape.iter().copied().filter(|&x| x > 0).collect();
    if shape.is_empty() {
        return 1;
    }
    let mut total = 0;
    for i in 0..shape.len() {
        let corner = i + 1 == shape.len() || shape[i + 1] < shape[i];
        if corner {
            let mut smaller = shape.clone();
            smaller[i] -= 1;
            total += standard_tableaux(&smaller);
        }
    }
    total
}

/// Longest weakly increasing subsequence.
pub fn longest_weakly_increasing(word: &[usize]) -> usize {
    let mut best = vec![0usize; word.len()];
    for i in 0..word.len() {
        best[i] = 1
            + (0..i)
                .filter(|&j| word[j] <= word[i])
                .map(|j| best[j])
                .max()
                .unwrap_or(0);
    }
    best.into_iter().max().unwrap_or(0)
}

/// Longest strictly decreasing subsequence.
pub fn longest_strictly_decreasing(word: &[usize]) -> usize {
    let mut best = vec![0usize; word.len()];
    for i in 0..word.len() {
        best[i] = 1
            + (0..i)
                .filter(|&j| word[j] > word[i])
                .map(|j| best[j])
                .max()
                .unwrap_or(0);
    }
    best.into_iter().max().unwrap_or(0)
}
