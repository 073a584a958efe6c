// Parameter panel model: definitions, presets, client-side validation
// (same per-level sum rule the server enforces), and patch building.

export interface ParamDef {
  key: string;
  label: string;
  group: "pace" | "hesitation" | "editing";
  min: number;
  max: number;
  step: number;
}

export const PARAM_DEFS: ParamDef[] = [
  { key: "char_pace_mean_ms", label: "Char pace mean (ms)", group: "pace", min: 0, max: 300, step: 1 },
  { key: "char_pace_std_ms", label: "Char pace spread (ms)", group: "pace", min: 0, max: 100, step: 1 },
  { key: "space_lag_mean_ms", label: "Word lag mean (ms)", group: "pace", min: 0, max: 600, step: 5 },
  { key: "space_lag_std_ms", label: "Word lag spread (ms)", group: "pace", min: 0, max: 200, step: 5 },
  { key: "deletion_pace_mean_ms", label: "Deletion pace mean (ms)", group: "pace", min: 0, max: 300, step: 1 },
  { key: "deletion_pace_std_ms", label: "Deletion pace spread (ms)", group: "pace", min: 0, max: 100, step: 1 },
  { key: "cursor_pace_mean_ms", label: "Cursor speed (ms/char)", group: "pace", min: 0, max: 30, step: 0.5 },
  { key: "cursor_pace_std_ms", label: "Cursor speed spread", group: "pace", min: 0, max: 10, step: 0.5 },
  { key: "pause_rate", label: "Pause rate (per word)", group: "hesitation", min: 0, max: 1, step: 0.01 },
  { key: "thinking_mean_s", label: "Thinking time mean (s)", group: "hesitation", min: 0, max: 6, step: 0.1 },
  { key: "thinking_std_s", label: "Thinking time spread (s)", group: "hesitation", min: 0, max: 2, step: 0.1 },
  { key: "paragraph_deletion_rate", label: "Sentence delete rate", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "paragraph_insertion_rate", label: "Sentence insert rate", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "paragraph_modification_rate", label: "Sentence modify rate", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "sentence_deletion_rate", label: "In-sentence word delete", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "sentence_insertion_rate", label: "In-sentence word insert", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "sentence_modification_rate", label: "In-sentence word modify", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "word_deletion_rate", label: "Word delete rate", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "word_insertion_rate", label: "Word insert rate", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "word_modification_rate", label: "Word modify rate", group: "editing", min: 0, max: 1, step: 0.01 },
  { key: "char_typo_rate", label: "Typo rate", group: "editing", min: 0, max: 1, step: 0.01 },
];

export type ParamValues = Record<string, number>;

const BASE: ParamValues = {
  char_pace_mean_ms: 80, char_pace_std_ms: 25,
  space_lag_mean_ms: 120, space_lag_std_ms: 40,
  deletion_pace_mean_ms: 60, deletion_pace_std_ms: 20,
  cursor_pace_mean_ms: 8, cursor_pace_std_ms: 2,
  pause_rate: 0, thinking_mean_s: 1.5, thinking_std_s: 0.5,
  paragraph_deletion_rate: 0, paragraph_insertion_rate: 0, paragraph_modification_rate: 0,
  sentence_deletion_rate: 0, sentence_insertion_rate: 0, sentence_modification_rate: 0,
  word_deletion_rate: 0, word_insertion_rate: 0, word_modification_rate: 0,
  char_typo_rate: 0,
};

export const PRESETS: Record<string, ParamValues> = {
  blue: {
    ...BASE,
    char_pace_mean_ms: 15, char_pace_std_ms: 3,
    space_lag_mean_ms: 25, space_lag_std_ms: 8,
    deletion_pace_mean_ms: 30, deletion_pace_std_ms: 8,
    cursor_pace_mean_ms: 4, cursor_pace_std_ms: 1,
    thinking_mean_s: 0, thinking_std_s: 0,
  },
  green: {
    ...BASE,
    space_lag_mean_ms: 150, space_lag_std_ms: 60,
    pause_rate: 0.15,
  },
  red: {
    ...BASE,
    space_lag_mean_ms: 150, space_lag_std_ms: 60,
    pause_rate: 0.15,
    paragraph_insertion_rate: 0.1,
    word_deletion_rate: 0.05,
    word_insertion_rate: 0.02,
    word_modification_rate: 0.08,
    char_typo_rate: 0.03,
  },
};

const LEVELS: Record<string, string[]> = {
  paragraph: ["paragraph_deletion_rate", "paragraph_insertion_rate", "paragraph_modification_rate"],
  sentence: ["sentence_deletion_rate", "sentence_insertion_rate", "sentence_modification_rate"],
  word: ["word_deletion_rate", "word_insertion_rate", "word_modification_rate"],
  character: ["char_typo_rate"],
};

/** Same rule the server enforces: every value in range, and per level
 * the rates may not sum past 1. Returns problems; empty means valid. */
export function validateParams(values: ParamValues): string[] {
  const problems: string[] = [];
  for (const def of PARAM_DEFS) {
    const value = values[def.key];
    if (value === undefined || Number.isNaN(value)) {
      problems.push(`${def.label}: missing value`);
      continue;
    }
    if (def.key.endsWith("_rate") && (value < 0 || value > 1)) {
      problems.push(`${def.label}: must be between 0 and 1`);
    } else if (value < 0) {
      problems.push(`${def.label}: must be >= 0`);
    }
  }
  for (const [level, keys] of Object.entries(LEVELS)) {
    const total = keys.reduce((sum, key) => sum + (values[key] ?? 0), 0);
    if (total > 1 + 1e-9) {
      problems.push(`${level} level rates sum to ${total.toFixed(2)}, exceeding 1`);
    }
  }
  return problems;
}

/** Minimal diff between acknowledged and edited values; null when the
 * edit is a no-op (no wire message should be sent). */
export function buildPatch(
  acknowledged: ParamValues,
  edited: ParamValues
): ParamValues | null {
  const patch: ParamValues = {};
  for (const def of PARAM_DEFS) {
    const before = acknowledged[def.key];
    const after = edited[def.key];
    if (after !== undefined && after !== before) {
      patch[def.key] = after;
    }
  }
  return Object.keys(patch).length ? patch : null;
}
