"""Extract metadata from a document and print what was found.

Generates one synthetic rendered document, runs the full extraction
pipeline with the bundled models, and prints the recovered metadata
followed by the start of the TEI serialization.

Run from the repository root:

    python3 demos/quickstart_extraction.py
"""

from scholarparse.ingest import parse_rich_xml
from scholarparse.pipeline import extract_document, load_default_models
from scholarparse.synth import generate_synthetic_document
from scholarparse.tei import export_tei


def main():
    xml, _ = generate_synthetic_document("two-col-indexed", seed=7,
                                         source_id="demo")
    document, report = parse_rich_xml(xml, source_id="demo")
    print(f"parsed {report.page_count} pages, {report.token_count} tokens")

    models = load_default_models()
    result = extract_document(document, models)

    print(f"\ntitle: {result.title}")
    for record in result.authors:
        email = record.email.address if record.email else "-"
        aff = record.affiliation.text if record.affiliation else "-"
        print(f"author: {record.name.full:<24} {email:<28} {aff}")

    print("\nsections:")
    for section in result.sections:
        if section.heading is not None:
            print(f"  {section.heading.text}")

    print(f"\n{len(result.references)} references, "
          f"{len(result.citations)} citation links, "
          f"{len(result.urls)} urls, {len(result.footnotes)} footnotes")

    tei = export_tei(result)
    print("\nTEI output starts with:")
    print("\n".join(tei.splitlines()[:12]))


if __name__ == "__main__":
    main()
