// Wire types, matching the server's canonical serialization exactly.
// In boundary documents, an absent key always means "unrestricted".

export interface BoundaryDoc {
  gender_allowed?: string[];
  races_allowed?: string[];
  require_international?: boolean;
  challenges_any?: string[];
  require_advising_change?: true;
  programs_allowed?: string[];
  advised_by_any?: string[];
  not_advised_by?: string[];
  usernames_allowed?: string[];
  other_info?: string;
  show_boundary?: boolean;
  show_to_parent_author?: boolean;
}

export interface TraitsDoc {
  gender?: string;
  races?: string[];
  international?: boolean;
  phd_program?: string;
  current_advisors?: string[];
  prior_advisors?: string[];
  challenges_experienced?: string[];
  advising_status_changed?: boolean;
}

export interface VocabEntry {
  id: string;
  label: string;
}

export interface Vocab {
  programs: VocabEntry[];
  faculty: VocabEntry[];
  challenges: VocabEntry[];
  genders: string[];
  races: string[];
}

export interface NodePayload {
  node_id: string;
  thread_id: string;
  parent_id: string | null;
  persona: string;
  body: string;
  created_at: string;
  own: boolean;
  boundary?: BoundaryDoc;
  state?: string;
}

export interface AccountView {
  account_id: string;
  email: string;
  status: string;
  moderator: boolean;
  default_persona: string;
  personas: string[];
  traits: TraitsDoc;
  default_boundary: BoundaryDoc | null;
}

export interface ModQueue {
  signups: Array<{
    account_id: string;
    email: string;
    requested_persona: string;
    traits: TraitsDoc;
    created_at: string;
  }>;
  held: Array<{
    node_id: string;
    thread_id: string;
    author_account_id: string;
    persona: string;
    body: string;
    boundary: BoundaryDoc;
    other_info: string;
    structural_audience: string[];
  }>;
  trait_audits: Array<{
    at: string;
    account_id: string;
    field: string;
    old: unknown;
    new: unknown;
  }>;
}

export interface ApiError {
  status: number;
  error: string;
  message: string;
}
