"""Reference BLEU (NLTK sentence_bleu, smoothing method1 with eps 1e-9) and
ROUGE-L F1 (rouge_score's LCS scorer) for the overlap fixtures. Inputs are
pre-tokenized lists so tokenization is not under test here."""
import json
import sys

from nltk.translate.bleu_score import SmoothingFunction, sentence_bleu
from rouge_score.rouge_scorer import _score_lcs

FIXTURES = [
    ("the cat is on the mat".split(), ["there is a cat on the mat".split()]),
    ("take your medicine every morning with food".split(), ["take the medicine each morning with food".split()]),
    ("call us if the fever comes back".split(), ["please call the clinic if your fever returns".split()]),
    ("a c d".split(), ["a b c d".split()]),
    ("follow up with your cardiologist in two weeks".split(), ["you should follow up with cardiology in two weeks".split(), "see your cardiologist in two weeks".split()]),
    ("return to the emergency room if you have chest pain".split(), ["come back to the emergency department if chest pain returns".split()]),
    ("short answer".split(), ["a much longer reference answer than the candidate".split()]),
    ("we checked your blood and your heart and everything looked stable".split(), ["your blood tests and heart tracing were stable".split()]),
]

if __name__ == "__main__":
    sm = SmoothingFunction(epsilon=1e-9).method1
    out = []
    for cand, refs in FIXTURES:
        out.append({
            "candidate": cand,
            "references": refs,
            "bleu": sentence_bleu(refs, cand, smoothing_function=sm),
            "rouge_l": _score_lcs(refs[0], cand).fmeasure,
        })
    json.dump(out, sys.stdout, indent=1)
    print()
