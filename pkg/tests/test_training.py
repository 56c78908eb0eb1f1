"""Unit tests for training-set construction and task fitting."""

import pytest

from scholarparse.crf import TrainConfig, viterbi_decode
from scholarparse.evaluate import ground_truth_to_text
from scholarparse.ingest import parse_rich_xml
from scholarparse.synth import STYLES, generate_synthetic_document
from scholarparse.training import (TASKS, TrainingPair,
                                   build_author_sequences,
                                   build_footnote_sequences,
                                   build_heading_sequences,
                                   build_title_sequences, load_corpus,
                                   train_task)


@pytest.fixture(scope="module")
def pairs():
    out = []
    for i, style in enumerate(STYLES):
        xml, gt = generate_synthetic_document(style, 17 + i, source_id=style)
        doc, _ = parse_rich_xml(xml, source_id=style)
        out.append(TrainingPair(document=doc, truth=gt))
    return out


class TestBuilders:
    def test_title_sequences_label_title_tokens(self, pairs):
        seqs = build_title_sequences(pairs)
        assert len(seqs) == len(pairs)
        for seq, pair in zip(seqs, pairs):
            titled = [lab for _, lab in seq.items if lab == "TITLE"]
            assert len(titled) == len(pair.truth.title.split())

    def test_author_sequences_cover_name_parts(self, pairs):
        seqs = build_author_sequences(pairs)
        for seq, pair in zip(seqs, pairs):
            n_parts = sum(1 for a in pair.truth.authors for p in a if p)
            labeled = sum(1 for _, lab in seq.items if lab == "AUTHOR")
            assert labeled == n_parts

    def test_heading_sequences_match_gold_count(self, pairs):
        seqs = build_heading_sequences(pairs)
        for seq, pair in zip(seqs, pairs):
            labeled = sum(1 for _, lab in seq.items if lab == "HEADING")
            assert labeled == len(pair.truth.section_headings)

    def test_footnote_sequences_match_gold_count(self, pairs):
        for pair in pairs:
            seqs = build_footnote_sequences([pair])
            labeled = sum(1 for seq in seqs for _, lab in seq.items
                          if lab == "FOOTNOTE")
            assert labeled == len(pair.truth.footnotes)


class TestTrainTask:
    def test_trained_title_model_decodes_training_doc(self, pairs):
        model = train_task("title", pairs, TrainConfig(max_iterations=25))
        assert model.task_name == "title"
        seq = build_title_sequences(pairs)[0]
        decoded = viterbi_decode(model, seq.features())
        assert decoded == seq.labels()

    def test_unknown_task_rejected(self, pairs):
        with pytest.raises(ValueError):
            train_task("paragraph", pairs)

    def test_task_list(self):
        assert TASKS == ("title", "author", "heading", "footnote")


class TestLoadCorpus:
    def test_reads_xml_gt_pairs(self, tmp_path, pairs):
        xml, gt = generate_synthetic_document(STYLES[0], 99, source_id="d99")
        (tmp_path / "d99.xml").write_bytes(xml)
        (tmp_path / "d99.gt.txt").write_text(ground_truth_to_text(gt), "utf-8")
        loaded = load_corpus(tmp_path)
        assert len(loaded) == 1
        assert loaded[0].truth.title == gt.title
        assert loaded[0].document.source_id == "d99"

    def test_xml_without_gt_skipped(self, tmp_path):
        xml, gt = generate_synthetic_document(STYLES[0], 99)
        (tmp_path / "a.xml").write_bytes(xml)
        (tmp_path / "b.xml").write_bytes(xml)
        (tmp_path / "b.gt.txt").write_text(ground_truth_to_text(gt), "utf-8")
        loaded = load_corpus(tmp_path)
        assert len(loaded) == 1

    def test_empty_directory_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            load_corpus(tmp_path)
