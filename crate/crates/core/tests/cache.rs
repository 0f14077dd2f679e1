use qmckay::group::Family;
use qmckay::io::{cache_load, cache_store, load_or_compute, CacheEntry, TableKind};
use qmckay::mckay::{CorrelatorTable, Potential};
use qmckay::{Error, Exec};

fn table(n: u32) -> CorrelatorTable {
    let p = Potential::binary_dihedral(n).unwrap();
    CorrelatorTable::conjectural(&p, 4, Exec::Seq).unwrap()
}

#[test]
fn round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t = table(5);
    let e = CacheEntry::from_table(&t, TableKind::Conjectural, 4);
    let path = cache_store(dir.path(), &e).unwrap();
    let back = cache_load(&path).unwrap();
    assert_eq!(back, e);
    let t2 = back.to_table().unwrap();
    assert_eq!(t2.entries, t.entries);
    assert_eq!(t2.class_names, t.class_names);
}

#[test]
fn flipped_bit_is_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let e = CacheEntry::from_table(&table(4), TableKind::Conjectural, 4);
    let path = cache_store(dir.path(), &e).unwrap();
    let mut bytes = std::fs::read(&path).unwrap();
    // flip a bit inside a row value digit
    let pos = bytes.windows(8).position(|w| w == b"\"value\":").unwrap() + 11;
    bytes[pos] ^= 1;
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(cache_load(&path), Err(Error::CorruptCache(_))));

    std::fs::write(&path, b"{ not json").unwrap();
    assert!(matches!(cache_load(&path), Err(Error::CorruptCache(_))));
}

#[test]
fn schema_mismatch_is_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let mut e = CacheEntry::from_table(&table(4), TableKind::Untwisted, 3);
    e.schema_version += 1;
    e.hash = e.content_hash();
    let path = cache_store(dir.path(), &e).unwrap();
    assert!(matches!(cache_load(&path), Err(Error::CorruptCache(_))));
}

#[test]
fn hash_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = CacheEntry::from_table(&table(6), TableKind::Conjectural, 4);
    let b = CacheEntry::from_table(&table(6), TableKind::Conjectural, 4);
    assert_eq!(a.hash, b.hash);
    let p1 = cache_store(dir.path(), &a).unwrap();
    let first = std::fs::read(&p1).unwrap();
    let p2 = cache_store(dir.path(), &b).unwrap();
    assert_eq!(p1, p2);
    assert_eq!(std::fs::read(&p2).unwrap(), first);
    let c = CacheEntry::from_table(&table(6), TableKind::WdvvSolved, 4);
    assert_ne!(a.hash, c.hash);
}

#[test]
fn load_or_compute_hits_second_time() {
    let dir = tempfile::tempdir().unwrap();
    let (t1, hit1) =
        load_or_compute(Some(dir.path()), Family::BinaryDihedral, 5, TableKind::Conjectural, 4, || Ok(table(5))).unwrap();
    assert!(!hit1);
    let (t2, hit2) = load_or_compute(Some(dir.path()), Family::BinaryDihedral, 5, TableKind::Conjectural, 4, || {
        panic!("should come from the cache")
    })
    .unwrap();
    assert!(hit2);
    assert_eq!(t1.entries, t2.entries);
}
