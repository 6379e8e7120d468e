// Interface strings. The language-switch mechanism is in place; English is
// the only catalog shipped so far.

const TABLES: Record<string, Record<string, string>> = {
  en: {
    app_title: "Diet label checker",
    login: "Log in",
    register: "Register",
    logout: "Log out",
    email: "Email",
    password: "Password",
    display_name: "Name",
    diets_heading: "Diets",
    choose_diet: "Choose",
    remove_diet: "Remove",
    chosen_badge: "chosen",
    custom_heading: "My unwanted ingredients",
    add_ingredient: "Add",
    remove_ingredient: "Remove",
    check_heading: "Check a label",
    paste_placeholder: "Paste the ingredient list here…",
    submit_check: "Check ingredients",
    checking: "Checking…",
    upload_image: "Upload a photo",
    use_camera: "Use camera",
    take_photo: "Take photo",
    compliant_message: "No unwanted ingredients were found.",
    violations_message: "Unwanted ingredients were found:",
    violated_diets_label: "Diets with forbidden ingredients found:",
    retake_prompt: "No text was recognized. Please retake the photo.",
    network_retry: "The service could not be reached. Try again.",
    language_label: "Language",
  },
};

let current = "en";

export function t(key: string): string {
  const table = TABLES[current] ?? TABLES["en"]!;
  return table[key] ?? TABLES["en"]![key] ?? key;
}

export function availableLanguages(): string[] {
  return Object.keys(TABLES);
}

/** Switch the interface language; returns false when no catalog is shipped. */
export function setLanguage(lang: string): boolean {
  if (!(lang in TABLES)) return false;
  current = lang;
  return true;
}

export function currentLanguage(): string {
  return current;
}
