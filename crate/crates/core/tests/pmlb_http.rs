//! `fetch_pmlb_from` against a throwaway local HTTP server.

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use flate2::write::GzEncoder;
use flate2::Compression;
use sgp_core::data::fetch_pmlb_from;
use sgp_core::DataError;

fn gz(text: &str) -> Vec<u8> {
    let mut e = GzEncoder::new(Vec::new(), Compression::default());
    e.write_all(text.as_bytes()).unwrap();
    e.finish().unwrap()
}

/// Serves `/tiny/tiny.tsv.gz` and `/junk/junk.tsv.gz`; everything else is 404.
fn serve() -> (String, Arc<AtomicUsize>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            counter.fetch_add(1, Ordering::SeqCst);
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            loop {
                let mut header = String::new();
                if reader.read_line(&mut header).unwrap() == 0 || header == "\r\n" {
                    break;
                }
            }
            let path = request_line.split_whitespace().nth(1).unwrap_or("");
            let (status, body) = match path {
                "/tiny/tiny.tsv.gz" => ("200 OK", gz("x\ty\ttarget\n1\t2\t0\n3\t4\t1\n5\t6\t1\n")),
                "/junk/junk.tsv.gz" => ("200 OK", b"not gzip".to_vec()),
                _ => ("404 Not Found", b"missing".to_vec()),
            };
            let head = format!(
                "HTTP/1.1 {status}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                body.len()
            );
            let _ = stream.write_all(head.as_bytes());
            let _ = stream.write_all(&body);
        }
    });
    (base, hits)
}

#[test]
fn download_then_cache_hit() {
    let (base, hits) = serve();
    let cache = tempfile::tempdir().unwrap();
    let ds = fetch_pmlb_from(&base, "tiny", cache.path()).unwrap();
    assert_eq!((ds.n_rows(), ds.n_features()), (3, 2));
    assert_eq!(ds.labels(), &[0, 1, 1]);
    assert!(cache.path().join("tiny.tsv.gz").is_file());
    assert_eq!(hits.load(Ordering::SeqCst), 1);

    let again = fetch_pmlb_from(&base, "tiny", cache.path()).unwrap();
    assert_eq!(again, ds);
    assert_eq!(hits.load(Ordering::SeqCst), 1, "cache hit must not touch the network");
}

#[test]
fn missing_dataset_is_unknown() {
    let (base, _) = serve();
    let cache = tempfile::tempdir().unwrap();
    let err = fetch_pmlb_from(&base, "nope", cache.path()).unwrap_err();
    assert!(matches!(err, DataError::UnknownDataset(ref n) if n == "nope"), "{err}");
    assert!(!cache.path().join("nope.tsv.gz").exists());
}

#[test]
fn corrupt_download_is_not_cached() {
    let (base, _) = serve();
    let cache = tempfile::tempdir().unwrap();
    let err = fetch_pmlb_from(&base, "junk", cache.path()).unwrap_err();
    assert!(matches!(err, DataError::Corrupt { .. }), "{err}");
    assert!(!cache.path().join("junk.tsv.gz").exists());
}
