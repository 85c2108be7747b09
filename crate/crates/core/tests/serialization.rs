use std::path::PathBuf;

use schemars::{schema_for, JsonSchema};
use serde::{de::DeserializeOwned, Serialize};

use nonhaus::audit::{run_audit, AuditFlags, Certificate, ReportDocument};
use nonhaus::embedding::{EmbeddingReport, EmbeddingSpec};
use nonhaus::lifting::{HomotopyField, LiftCertificate, LiftedPath, PLPathY};
use nonhaus::space::{SpaceConfig, TopologyModel};
use nonhaus::symmetry::{deck_group, DeckGroupTable, PLLoopL};
use nonhaus::thickened::{thick_audit, ThickAuditReport};

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(v: &T) {
    let text = serde_json::to_string(v).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, v);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn every_audit_certificate_round_trips() {
    for k in [2, 3] {
        let cfg = SpaceConfig::new(k, TopologyModel::Pseudometric).unwrap();
        for paper_constancy in [false, true] {
            let flags = AuditFlags { paper_constancy, ..AuditFlags::default() };
            let doc = run_audit(&cfg, &flags).unwrap();
            round_trip(&doc);
            for cert in doc.certificates.values() {
                round_trip(cert);
            }
        }
    }
}

#[test]
fn other_documents_round_trip() {
    round_trip(&deck_group(3).unwrap());
    round_trip(&thick_audit(8, EmbeddingSpec::Spiral).unwrap());
    round_trip(&nonhaus::embedding::embedding_checks(50).unwrap());
    round_trip(&nonhaus::lifting::make_merging_field());
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(serde_json::from_str::<SpaceConfig>(r#"{"k":1,"model":"quotient"}"#).is_err());
    assert!(serde_json::from_str::<PLPathY>(r#"{"breakpoints":[["0","1"],["1/2","0"],["1/2","0"]]}"#).is_err());
    assert!(serde_json::from_str::<nonhaus::Q>(r#""1/0""#).is_err());
    assert!(serde_json::from_str::<Certificate>(r#"{"kind":"nonsense"}"#).is_err());
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn check_schema<T: JsonSchema>(name: &str) {
    let text = serde_json::to_string_pretty(&schema_for!(T)).unwrap() + "\n";
    let path = schema_dir().join(format!("{name}.schema.json"));
    if std::env::var_os("UPDATE_SCHEMAS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("{} missing; rerun with UPDATE_SCHEMAS=1", path.display()));
    assert_eq!(on_disk, text, "{name} schema is stale; rerun with UPDATE_SCHEMAS=1");
}

#[test]
fn shipped_schemas_are_current() {
    check_schema::<ReportDocument>("report");
    check_schema::<Certificate>("certificate");
    check_schema::<LiftCertificate>("lift-certificate");
    check_schema::<LiftedPath>("lifted-path");
    check_schema::<PLPathY>("path");
    check_schema::<PLLoopL>("loop");
    check_schema::<HomotopyField>("field");
    check_schema::<DeckGroupTable>("deck-group");
    check_schema::<ThickAuditReport>("thick-report");
    check_schema::<EmbeddingReport>("embedding-report");
}
