from pathlib import Path

import pytest

from sketchbench.html.dom import parse_html, structural_paths
from sketchbench.html.selectors import Selector, classify_element
from sketchbench.taxonomy import ComponentClass

DATA = Path(__file__).parent / "data"


class TestSelectorParsing:
    def test_type_selector(self):
        sel = Selector.parse("nav")
        assert sel.matches("nav", {})
        assert not sel.matches("div", {})

    def test_class_shorthand_is_token_match(self):
        sel = Selector.parse(".navbar")
        assert sel.matches("div", {"class": "navbar"})
        assert sel.matches("div", {"class": "top navbar dark"})
        assert not sel.matches("div", {"class": "navbar-list"})

    def test_type_with_class(self):
        sel = Selector.parse("div.form")
        assert sel.matches("div", {"class": "form"})
        assert not sel.matches("span", {"class": "form"})
        assert not sel.matches("div", {"class": "formation"})

    def test_attribute_equality(self):
        sel = Selector.parse('input[type="submit"]')
        assert sel.matches("input", {"type": "submit"})
        assert not sel.matches("input", {"type": "submit2"})
        assert not sel.matches("input", {})

    def test_token_vs_substring(self):
        token = Selector.parse('[class~="menu"]')
        substr = Selector.parse('[class*="menu"]')
        attrs = {"class": "menu-bar"}
        assert not token.matches("div", attrs)
        assert substr.matches("div", attrs)


class TestClassifyElement:
    @pytest.mark.parametrize(
        "tag,attrs,has_text,expected",
        [
            ("nav", {}, False, ComponentClass.NAVIGATION_BAR),
            ("input", {"type": "submit"}, False, ComponentClass.BUTTON),
            ("div", {"class": "menu-bar"}, True, ComponentClass.TEXT_BLOCK),
            ("div", {"class": "form"}, False, ComponentClass.FORM_TABLE),
            ("div", {}, False, None),
            ("div", {}, True, ComponentClass.TEXT_BLOCK),
            ("img", {"class": "navbar"}, False, ComponentClass.IMAGE),
            ("video", {"class": "menu"}, False, ComponentClass.VIDEO),
            ("button", {"class": "nav"}, True, ComponentClass.BUTTON),
            ("span", {"class": "divider"}, True, ComponentClass.DIVIDER),
            ("ul", {"class": "navbar-list"}, False, None),
        ],
    )
    def test_classification_cases(self, tag, attrs, has_text, expected):
        assert classify_element(tag, attrs, has_text) == expected

    def test_pure_function(self):
        for _ in range(3):
            assert classify_element("nav", {}, False) == ComponentClass.NAVIGATION_BAR


def load_labels():
    labels = {}
    for line in (DATA / "selector_corpus.labels").read_text().splitlines():
        if not line.strip():
            continue
        path, label = line.split("\t")
        labels[path] = None if label == "none" else ComponentClass(label)
    return labels


class TestCorpusConformance:
    def test_corpus_classifies_with_full_agreement(self):
        doc = parse_html((DATA / "selector_corpus.html").read_text())
        paths = structural_paths(doc)
        labels = load_labels()
        assert len(labels) >= 30
        mismatches = []
        for path, expected in labels.items():
            el = paths.get(path)
            assert el is not None, f"corpus path missing from DOM: {path}"
            got = classify_element(el.tag, el.attrs, el.has_direct_text())
            if got != expected:
                mismatches.append((path, expected, got))
        assert mismatches == []

    def test_every_selector_class_appears_in_corpus(self):
        labels = load_labels()
        seen = {v for v in labels.values() if v is not None}
        assert seen == set(ComponentClass)
