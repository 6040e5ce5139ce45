import re

_LINE_COMMENT = re.compile(r"//[^\n]*")


def strip_line_comments(text: str) -> str:
    """Strips `//` comments up to the end of each line."""
    return _LINE_COMMENT.sub("", text)
