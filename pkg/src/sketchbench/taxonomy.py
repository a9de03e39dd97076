"""Visual component taxonomy shared by the metric and the HTML extractor."""

from __future__ import annotations

import enum


class ComponentClass(enum.Enum):
    """The seven visual component categories used for layout scoring."""

    VIDEO = "video"
    IMAGE = "image"
    TEXT_BLOCK = "text_block"
    FORM_TABLE = "form_table"
    BUTTON = "button"
    NAVIGATION_BAR = "navigation_bar"
    DIVIDER = "divider"

    def __repr__(self) -> str:  # noqa: D105
        return f"ComponentClass.{self.name}"


# An element matching selectors of several classes receives the first class
# of this list that matches; specific visual roles outrank the generic text
# fallback.
CLASSIFICATION_PRECEDENCE: tuple[ComponentClass, ...] = (
    ComponentClass.VIDEO,
    ComponentClass.IMAGE,
    ComponentClass.BUTTON,
    ComponentClass.FORM_TABLE,
    ComponentClass.NAVIGATION_BAR,
    ComponentClass.DIVIDER,
    ComponentClass.TEXT_BLOCK,
)

# Reporting buckets: text and images are reported on their own, the five
# remaining classes are folded into a single "other" bucket.
OTHER_BUCKET: tuple[ComponentClass, ...] = (
    ComponentClass.VIDEO,
    ComponentClass.NAVIGATION_BAR,
    ComponentClass.FORM_TABLE,
    ComponentClass.BUTTON,
    ComponentClass.DIVIDER,
)
