use crate::error::{Error, Result};

fn check(len: usize, depth: usize) -> Result<usize> {
    if depth == 0 {
        return Err(Error::Length("interleaver depth must be positive".into()));
    }
    if !len.is_multiple_of(depth) {
        return Err(Error::Length(format!(
            "length {len} is not a multiple of interleaver depth {depth}"
        )));
    }
    Ok(len / depth)
}

/// Block interleaver: written row by row into rows of `depth` entries, read
/// out column by column.
pub fn interleave<T: Copy>(data: &[T], depth: usize) -> Result<Vec<T>> {
    let rows = check(data.len(), depth)?;
    let mut out = Vec::with_capacity(data.len());
    for col in 0..depth {
        out.extend((0..rows).map(|row| data[row * depth + col]));
    }
    Ok(out)
}

pub fn deinterleave<T: Copy>(data: &[T], depth: usize) -> Result<Vec<T>> {
    let rows = check(data.len(), depth)?;
    let mut out = Vec::with_capacity(data.len());
    for row in 0..rows {
        out.extend((0..depth).map(|col| data[col * rows + row]));
    }
    Ok(out)
}
