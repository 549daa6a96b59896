public class HospitalSurveyHandler {
    public void validateHospital(Hospital hospital) {
        hospitalStore.validate(hospital);
    }
    public void addSurvey(Survey survey) {
        surveyStore.add(survey);
    }
}
