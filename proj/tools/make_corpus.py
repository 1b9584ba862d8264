#!/usr/bin/env python3
# Builds tests/data/enwiki_text8_1mb.txt from the shortened enwiki dump that
# ships inside the gensim wheel (gensim/test/test_data/). Markup stripping
# follows the spirit of Mahoney's wikifil.pl; the final alphabet reduction
# matches `lmzip --preprocess-text8` (a-z and single spaces, digits dropped).
import bz2
import re
import sys
import zipfile

MEMBER = "gensim/test/test_data/enwiki-latest-pages-articles1.xml-p000000010p000030302-shortened.bz2"


def clean_article(text):
    text = re.sub(r"&lt;", "<", text)
    text = re.sub(r"&gt;", ">", text)
    text = re.sub(r"&quot;", '"', text)
    text = re.sub(r"&amp;", "&", text)
    text = re.sub(r"<ref[^>]*/>", " ", text)
    text = re.sub(r"<ref.*?</ref>", " ", text, flags=re.S)
    text = re.sub(r"<[^>]*>", " ", text)
    text = re.sub(r"&nbsp;|&[a-z]+;", " ", text)
    for _ in range(3):
        text = re.sub(r"\{\{[^{}]*\}\}", " ", text)
        text = re.sub(r"\{\|[^{}]*\|\}", " ", text)
    text = re.sub(r"\[\[(?:image|file|category|[a-z\-]{2,12}):[^\]]*\]\]", " ", text, flags=re.I)
    text = re.sub(r"\[\[[^\]|]*\|([^\]]*)\]\]", r"\1", text)
    text = re.sub(r"\[\[([^\]]*)\]\]", r"\1", text)
    text = re.sub(r"\[https?:[^ \]]*\s*([^\]]*)\]", r"\1", text)
    text = re.sub(r"https?:\S+", " ", text)
    return text


def text8(raw):
    out = re.sub(r"[^a-z]+", " ", raw.lower())
    return out.strip()


def main():
    wheel, dest, size = sys.argv[1], sys.argv[2], int(sys.argv[3]) if len(sys.argv) > 3 else 1_000_000
    xml = bz2.decompress(zipfile.ZipFile(wheel).read(MEMBER)).decode("utf-8", "replace")
    articles = re.findall(r"<text[^>]*>(.*?)</text>", xml, flags=re.S)
    parts = []
    for a in articles:
        if a.lstrip().lower().startswith("#redirect"):
            continue
        parts.append(text8(clean_article(a)))
    corpus = " ".join(p for p in parts if p)[:size].rstrip()
    with open(dest, "w", encoding="ascii") as f:
        f.write(corpus)
    print(f"{len(corpus)} bytes from {len(parts)} articles")


if __name__ == "__main__":
    main()
