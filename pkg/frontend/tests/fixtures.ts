// Captured verbatim from the ontoloop HTTP API; do not edit by hand.
import type { JustificationRecord, ReportJson } from "../src/types.js";

export const REPORT: ReportJson = {
  "records": 120,
  "models": [
    "ChatGPT 4o",
    "Gemini 2.0 Flash Thinking",
    "Gemma3 27B"
  ],
  "tables": [
    {
      "metric": "accuracy",
      "tests": [
        1,
        2,
        3,
        4,
        5,
        6,
        7,
        8
      ],
      "pooled": [
        4.0,
        4.866666666666666,
        4.6,
        4.6,
        4.8,
        4.133333333333334,
        5.0,
        5.0
      ],
      "change": 1.0,
      "models": [
        {
          "model": "ChatGPT 4o",
          "points": [
            [
              1,
              4.0
            ],
            [
              2,
              5.0
            ],
            [
              3,
              4.6
            ],
            [
              4,
              4.6
            ],
            [
              5,
              4.8
            ],
            [
              6,
              4.2
            ],
            [
              7,
              5.0
            ],
            [
              8,
              5.0
            ]
          ],
          "change": 1.0,
          "overall": 4.65
        },
        {
          "model": "Gemini 2.0 Flash Thinking",
          "points": [
            [
              1,
              4.0
            ],
            [
              2,
              4.8
            ],
            [
              3,
              4.6
            ],
            [
              4,
              4.6
            ],
            [
              5,
              4.8
            ],
            [
              6,
              4.2
            ],
            [
              7,
              5.0
            ],
            [
              8,
              5.0
            ]
          ],
          "change": 1.0,
          "overall": 4.625
        },
        {
          "model": "Gemma3 27B",
          "points": [
            [
              1,
              4.0
            ],
            [
              2,
              4.8
            ],
            [
              3,
              4.6
            ],
            [
              4,
              4.6
            ],
            [
              5,
              4.8
            ],
            [
              6,
              4.0
            ],
            [
              7,
              5.0
            ],
            [
              8,
              5.0
            ]
          ],
          "change": 1.0,
          "overall": 4.6
        }
      ]
    },
    {
      "metric": "coherence",
      "tests": [
        1,
        2,
        3,
        4,
        5,
        6,
        7,
        8
      ],
      "pooled": [
        4.0,
        4.866666666666666,
        4.6,
        4.6,
        4.8,
        4.066666666666666,
        5.0,
        5.0
      ],
      "change": 1.0,
      "models": [
        {
          "model": "ChatGPT 4o",
          "points": [
            [
              1,
              4.0
            ],
            [
              2,
              4.8
            ],
            [
              3,
              4.6
            ],
            [
              4,
              4.6
            ],
            [
              5,
              4.8
            ],
            [
              6,
              4.0
            ],
            [
              7,
              5.0
            ],
            [
              8,
              5.0
            ]
          ],
          "change": 1.0,
          "overall": 4.6
        },
        {
          "model": "Gemini 2.0 Flash Thinking",
          "points": [
            [
              1,
              4.0
            ],
            [
              2,
              5.0
            ],
            [
              3,
              4.6
            ],
            [
              4,
              4.6
            ],
            [
              5,
              4.8
            ],
            [
              6,
              4.2
            ],
            [
              7,
              5.0
            ],
            [
              8,
              5.0
            ]
          ],
          "change": 1.0,
          "overall": 4.65
        },
        {
          "model": "Gemma3 27B",
          "points": [
            [
              1,
              4.0
            ],
            [
              2,
              4.8
            ],
            [
              3,
              4.6
            ],
            [
              4,
              4.6
            ],
            [
              5,
              4.8
            ],
            [
              6,
              4.0
            ],
            [
              7,
              5.0
            ],
            [
              8,
              5.0
            ]
          ],
          "change": 1.0,
          "overall": 4.6
        }
      ]
    }
  ],
  "analyses": [
    {
      "analysis": 1,
      "from_test": 1,
      "to_test": 8,
      "accuracy": {
        "improvements": 15,
        "declines": 0,
        "ties": 0,
        "n_effective": 15,
        "p_two_sided": 6.103515625e-05,
        "ci": [
          0.781980639089466,
          1.0
        ],
        "degenerate": false
      },
      "coherence": {
        "improvements": 15,
        "declines": 0,
        "ties": 0,
        "n_effective": 15,
        "p_two_sided": 6.103515625e-05,
        "ci": [
          0.781980639089466,
          1.0
        ],
        "degenerate": false
      }
    },
    {
      "analysis": 2,
      "from_test": 1,
      "to_test": 6,
      "accuracy": {
        "improvements": 3,
        "declines": 1,
        "ties": 11,
        "n_effective": 4,
        "p_two_sided": 0.625,
        "ci": [
          0.19412044968324343,
          0.9936905367902902
        ],
        "degenerate": false
      },
      "coherence": {
        "improvements": 3,
        "declines": 2,
        "ties": 10,
        "n_effective": 5,
        "p_two_sided": 1.0,
        "ci": [
          0.14663279963467313,
          0.9472550494736831
        ],
        "degenerate": false
      }
    },
    {
      "analysis": 3,
      "from_test": 6,
      "to_test": 8,
      "accuracy": {
        "improvements": 12,
        "declines": 0,
        "ties": 3,
        "n_effective": 12,
        "p_two_sided": 0.00048828125,
        "ci": [
          0.7353515306029488,
          1.0
        ],
        "degenerate": false
      },
      "coherence": {
        "improvements": 12,
        "declines": 0,
        "ties": 3,
        "n_effective": 12,
        "p_two_sided": 0.00048828125,
        "ci": [
          0.7353515306029488,
          1.0
        ],
        "degenerate": false
      }
    }
  ]
};

export const PENDING_RECORD: JustificationRecord = {
  "id": "j-fix",
  "intent": "merge duplicate sensor classes",
  "claim": "Carry out the planned response: map legacy ids; rewrite links. Goal: merge duplicate sensor classes.",
  "proposed_steps": [
    "map legacy ids",
    "rewrite links"
  ],
  "grounds": [
    "e1",
    "e2"
  ],
  "evidence": [
    {
      "id": "e1",
      "statement": "two ids resolve to one physical device",
      "source": {
        "kind": "doc",
        "ref": "audit-3"
      },
      "confidence": 0.9
    },
    {
      "id": "e2",
      "statement": "no inbound links use the legacy id",
      "source": {
        "kind": "query",
        "ref": "links-7"
      },
      "confidence": 0.6
    }
  ],
  "warrant": "Together the 2 cited observations establish both the failure and its remedy, so the decision follows directly.",
  "backing": [
    "Standard incident-response runbook.",
    "Vendor operations guidance for the affected system."
  ],
  "rebuttals": [
    {
      "text": "The observation that two ids resolve to one physical may be stale by the time action is taken.",
      "attacks": "grounds"
    },
    {
      "text": "The reasoning assumes the remedy has no side effects.",
      "attacks": "warrant"
    }
  ],
  "qualifiers": [
    {
      "text": "Valid only while the cited observations remain current.",
      "answers": [
        0
      ]
    },
    {
      "text": "Scope limited to incidents of this kind: no inbound links use the legacy id",
      "answers": [
        1
      ]
    }
  ],
  "risk": "high",
  "created_by": "opa",
  "created_at": "2026-08-19T18:14:15.222305+00:00",
  "status": "proposed",
  "transcript": [
    {
      "part": "claim",
      "prompt": "# chain-v1 claim\nYou are helping operations staff commit to a course of action.\n\nGoal: merge duplicate sensor classes\n\nProposed steps:\n1. map legacy ids\n2. rewrite links\n\nState the single decision these steps amount to, as one sentence.\nRespond with exactly one line starting with \"claim: \".\n",
      "response": "claim: Carry out the planned response: map legacy ids; rewrite links. Goal: merge duplicate sensor classes."
    },
    {
      "part": "grounds",
      "prompt": "# chain-v1 grounds\nGoal: merge duplicate sensor classes\nDecision under consideration: Carry out the planned response: map legacy ids; rewrite links. Goal: merge duplicate sensor classes.\n\nKnown evidence:\n- [e1] two ids resolve to one physical device (source doc:audit-3, confidence 0.9)\n- [e2] no inbound links use the legacy id (source query:links-7, confidence 0.6)\n\nRestate each piece of evidence that supports the decision, citing its id.\nRespond only with lines of the form \"ground: <evidence-id> :: <statement>\".\n",
      "response": "ground: e1 :: two ids resolve to one physical device\nground: e2 :: no inbound links use the legacy id"
    },
    {
      "part": "warrant",
      "prompt": "# chain-v1 warrant\nDecision: Carry out the planned response: map legacy ids; rewrite links. Goal: merge duplicate sensor classes.\n\nSupporting facts:\n- e1: two ids resolve to one physical device\n- e2: no inbound links use the legacy id\n\nGive the chain of reasoning that connects these facts to the decision.\nRespond with exactly one line starting with \"warrant: \".\n",
      "response": "warrant: Together the 2 cited observations establish both the failure and its remedy, so the decision follows directly."
    },
    {
      "part": "backing",
      "prompt": "# chain-v1 backing\nWarrant under scrutiny: Together the 2 cited observations establish both the failure and its remedy, so the decision follows directly.\n\nList authorities, precedents or procedures that support this reasoning.\nRespond only with lines starting with \"backing: \".\n",
      "response": "backing: Standard incident-response runbook.\nbacking: Vendor operations guidance for the affected system."
    },
    {
      "part": "rebuttals",
      "prompt": "# chain-v1 rebuttals\nDecision: Carry out the planned response: map legacy ids; rewrite links. Goal: merge duplicate sensor classes.\nReasoning: Together the 2 cited observations establish both the failure and its remedy, so the decision follows directly.\n\nSupporting facts:\n- e1: two ids resolve to one physical device\n- e2: no inbound links use the legacy id\n\nRaise objections or counterexamples. Tag each with the part it attacks.\nRespond only with lines of the form \"rebuttal[<grounds|warrant|claim>]: <text>\".\n",
      "response": "rebuttal[grounds]: The observation that two ids resolve to one physical may be stale by the time action is taken.\nrebuttal[warrant]: The reasoning assumes the remedy has no side effects."
    },
    {
      "part": "qualifiers",
      "prompt": "# chain-v1 qualifiers\nDecision: Carry out the planned response: map legacy ids; rewrite links. Goal: merge duplicate sensor classes.\n\nSupporting facts:\n- e1: two ids resolve to one physical device\n- e2: no inbound links use the legacy id\n\nObjections raised:\n0. [grounds] The observation that two ids resolve to one physical may be stale by the time action is taken.\n1. [warrant] The reasoning assumes the remedy has no side effects.\n\nNarrow the decision's scope so every objection is answered. Reference\nobjection numbers.\nRespond only with lines of the form \"qualifier[answers=<n,...>]: <text>\".\n",
      "response": "qualifier[answers=0]: Valid only while the cited observations remain current.\nqualifier[answers=1]: Scope limited to incidents of this kind: no inbound links use the legacy id"
    }
  ],
  "decided_by": null,
  "decision_rationale": null,
  "accepted_rebuttals": []
};
