//! Independent transcriptions of the four prompt templates, rendered.
#![allow(dead_code)]

pub const REQ: &str = "The user shall be able to log in with a password.";
pub const CODE: &str = "public class Login {\n    boolean check(String pw) { return pw != null; }\n}";

pub fn golden_zero_shot_code(lang: &str, requirements: &str) -> String {
    [
        "# CONTEXT #".to_string(),
        format!("I want to generate the corresponding {lang} code based on the following requirements."),
        requirements.to_string(),
        "# OBJECTIVE #".to_string(),
        format!(
            "Generate {lang} code for me and fully implement the functions described in the requirements. \
             Must maintain high readability, completeness, accuracy, and compliance with {lang} best practices."
        ),
        "# STYLE #".to_string(),
        "Follow the writing style of a senior software development engineer who implement requirements.".to_string(),
        "# TONE #".to_string(),
        "Accurate, clear, concise, readable, consistent and reusable.".to_string(),
        "# AUDIENCE #".to_string(),
        format!(
            "The target audience for the {lang} code are other programmers, testers, code reviewers, and document writers. \
             Tailor your {lang} code to target what this audience typically looks out for in software development products."
        ),
        "# RESPONSE #".to_string(),
        format!(
            "Only {lang} code, maintain clarity, conciseness, readability, modularity, maintainability, robustness, \
             testability, efficiency, security, consistency, and scalability."
        ),
    ]
    .join("\n\n")
}

pub fn golden_zero_shot_requirements(code: &str) -> String {
    [
        "# CONTEXT #".to_string(),
        format!("I want to summarize the corresponding requirements from the following code.\n{code}"),
        "# OBJECTIVE #".to_string(),
        "Extract user requirements that focus on the goals that users expect to achieve through this feature. \
         Avoid involving code details and focus on user actions and expected results. \
         Ensure that the description is clear and accurately expresses the user's intention and expected experience."
            .to_string(),
        "# STYLE #".to_string(),
        "Follow the writing style of senior software engineers who define requirements, such as Frederick P. Brooks."
            .to_string(),
        "# TONE #".to_string(),
        "Clear, accurate, concise, and formal".to_string(),
        "# AUDIENCE #".to_string(),
        "The target audience for the requirements are quality assurance teams, testing engineers, business analysts, \
         and development teams. Tailor your requirements to target what this audience typically looks out for in \
         software development products."
            .to_string(),
        "# RESPONSE #".to_string(),
        "The requirement text, maintain clarity, achieve consistency, and be completely unambiguous.".to_string(),
    ]
    .join("\n\n")
}

pub fn golden_few_shot_code(lang: &str, ex_req: &str, ex_code: &str, requirements: &str) -> String {
    [
        format!(
            "Generate the corresponding {lang} code based on the following <<< REQUIREMENTS >>>.Generate {lang} code \
             for me and fully implement the functions described in the requirements. Must maintain high readability, \
             completeness, accuracy, and compliance with {lang} best practices. Give the {lang} code without any other \
             preamble text and require."
        ),
        "###".to_string(),
        "EXAMPLE REQUIREMENTS".to_string(),
        ex_req.to_string(),
        "EXAMPLE OUTPUTS".to_string(),
        ex_code.to_string(),
        "###".to_string(),
        "<<<".to_string(),
        requirements.to_string(),
        ">>>".to_string(),
    ]
    .join("\n\n")
}

pub fn golden_few_shot_requirements(ex_code: &str, ex_req: &str, code: &str) -> String {
    [
        "Summarize the corresponding requirements from the following <<< CODE >>>.Extract user requirements that \
         focus on the goals that users expect to achieve through this feature. Avoid involving code details and focus \
         on user actions and expected results. Ensure that the description is clear and accurately expresses the \
         user's intention and expected experience. Give the user requirements without any other preamble text and code."
            .to_string(),
        "###".to_string(),
        "EXAMPLE CODE".to_string(),
        ex_code.to_string(),
        "EXAMPLE OUTPUTS".to_string(),
        ex_req.to_string(),
        "###".to_string(),
        "<<<".to_string(),
        code.to_string(),
        ">>>".to_string(),
    ]
    .join("\n\n")
}
