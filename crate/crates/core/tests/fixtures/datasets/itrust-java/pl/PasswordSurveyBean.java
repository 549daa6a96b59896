public class PasswordSurveyBean {
    public void submitPassword(Password password) {
        passwordStore.submit(password);
    }
    public void updatePassword(Password password) {
        passwordStore.update(password);
    }
    public void validateSurvey(Survey survey) {
        surveyStore.validate(survey);
    }
    public void validatePassword(Password password) {
        passwordStore.validate(password);
    }
}
