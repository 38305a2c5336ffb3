"""Regenerates the reference fixtures under tests/data from the Hugging Face
implementations. The C++ tests compare against these files; they are never
produced by the library under test.

  tiny_roberta/   random 2-layer RoBERTa encoder + toy byte-level BPE files
  tiny_unigram/   small Unigram tokenizer.json with Metaspace pre-tokenizer
  reference.json  token ids and encoder hidden states computed by transformers
"""
import json
import pathlib

import torch
from tokenizers import Tokenizer, models, pre_tokenizers, decoders
from transformers import RobertaConfig, RobertaModel

HERE = pathlib.Path(__file__).parent
ROBERTA = HERE / "tiny_roberta"
UNIGRAM = HERE / "tiny_unigram"

BPE_TEXTS = [
    "hope",
    "i hope things get better",
    "hope hope hopeful",
    "schöne grüße viel glück",
    "a  b",
    "ohp peh",
    "",
]
UNIGRAM_TEXTS = ["hope", "hop", "xyz hope", "hope is here", "pe ho", "grüße", ""]


def bpe_tokenizer():
    # The RoBERTa fast tokenizer pipeline: byte-level pre-tokenizer plus BPE.
    tok = Tokenizer(models.BPE.from_file(str(ROBERTA / "vocab.json"), str(ROBERTA / "merges.txt")))
    tok.pre_tokenizer = pre_tokenizers.ByteLevel(add_prefix_space=False)
    return tok


def bpe_reference():
    tok = bpe_tokenizer()
    return [{"text": t, "ids": tok.encode(t, add_special_tokens=False).ids} for t in BPE_TEXTS]


def unigram_reference():
    vocab = [("<s>", 0.0), ("<pad>", 0.0), ("</s>", 0.0), ("<unk>", 0.0),
             ("▁hope", -1.0), ("▁", -2.0), ("h", -3.0), ("o", -3.0),
             ("p", -3.0), ("e", -3.0), ("▁ho", -4.0), ("pe", -4.0),
             ("▁is", -2.5), ("▁here", -2.5), ("r", -3.5), ("ü", -3.5),
             ("ß", -3.5), ("g", -3.5)]
    tok = Tokenizer(models.Unigram(vocab, unk_id=3, byte_fallback=False))
    tok.pre_tokenizer = pre_tokenizers.Metaspace()
    tok.decoder = decoders.Metaspace()
    tok.add_special_tokens(["<s>", "<pad>", "</s>", "<unk>"])
    UNIGRAM.mkdir(exist_ok=True)
    tok.save(str(UNIGRAM / "tokenizer.json"))
    return [{"text": t, "ids": tok.encode(t, add_special_tokens=False).ids} for t in UNIGRAM_TEXTS]


def encoder_reference():
    torch.manual_seed(1234)
    cfg = RobertaConfig(
        vocab_size=264, hidden_size=16, num_hidden_layers=2, num_attention_heads=2,
        intermediate_size=32, max_position_embeddings=40, type_vocab_size=1,
        pad_token_id=1, bos_token_id=0, eos_token_id=2, hidden_act="gelu",
        layer_norm_eps=1e-5, hidden_dropout_prob=0.0, attention_probs_dropout_prob=0.0,
    )
    model = RobertaModel(cfg, add_pooling_layer=True)
    with torch.no_grad():
        for p in model.parameters():
            p.copy_(torch.randn_like(p) * 0.3)
    model.save_pretrained(str(ROBERTA), safe_serialization=True)

    # Evaluate in double precision on exactly the stored float32 weights.
    model = RobertaModel.from_pretrained(str(ROBERTA)).double().eval()
    tok = bpe_tokenizer()
    rows = [[0] + tok.encode(t).ids + [2] for t in ["i hope things get better", "hope", "no"]]
    width = max(len(r) for r in rows)
    input_ids = [r + [1] * (width - len(r)) for r in rows]
    attention_mask = [[1] * len(r) + [0] * (width - len(r)) for r in rows]
    ids = torch.tensor(input_ids)
    mask = torch.tensor(attention_mask)
    with torch.no_grad():
        hidden = model(input_ids=ids, attention_mask=mask).last_hidden_state
    return {
        "input_ids": input_ids,
        "attention_mask": attention_mask,
        "hidden": hidden.tolist(),
    }


def main():
    ROBERTA.mkdir(exist_ok=True)
    ref = {"bpe": bpe_reference(), "unigram": unigram_reference(), "encoder": encoder_reference()}
    (HERE / "reference.json").write_text(json.dumps(ref, indent=1) + "\n")


if __name__ == "__main__":
    main()
