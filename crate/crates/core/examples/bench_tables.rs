// Average quality over a small corpus per bit plane, with the two
// reference schemes appended.

use pixelseal::cli::bench::{run_bench, summary_table, write_csv, BenchResult};
use pixelseal::fixtures::corpus;
use pixelseal::{BitPlane, CameraId};

pub fn run_example(count: usize, width: usize, height: usize) -> pixelseal::Result<(BenchResult, String)> {
    let images = corpus(count, width, height, 31);
    let id = CameraId::from_text("MCC-F220/cam-01")?;
    let planes: Vec<BitPlane> = BitPlane::TABLE_PLANES.to_vec();
    let result = run_bench(&images, &planes, &id)?;
    let mut csv = Vec::new();
    write_csv(&mut csv, &result, true)?;
    Ok((result, String::from_utf8(csv).expect("csv is utf-8")))
}

fn main() -> pixelseal::Result<()> {
    let (result, csv) = run_example(5, 800, 532)?;
    print!("{}", summary_table(&result, true));
    println!();
    print!("{csv}");
    Ok(())
}
