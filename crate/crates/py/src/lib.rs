use pyo3::prelude::*;

#[pymodule]
fn frechet_rs(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
